#pragma once

#include "illum/covering.hpp"
#include "illum/decimal.hpp"
#include "illum/enclosure.hpp"
#include "illum/errors.hpp"
#include "illum/geometry.hpp"
#include "illum/hadwiger.hpp"
#include "illum/meanwidth.hpp"
#include "illum/special.hpp"
