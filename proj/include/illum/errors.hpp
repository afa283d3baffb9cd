#pragma once

#include <stdexcept>
#include <string>

namespace illum {

/// A mathematical domain violation: log of a nonpositive enclosure,
/// division by an enclosure containing zero, and so on.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A caller broke a documented precondition (index order, vector length).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The requested quantity has no source for this dimension or class.
struct NotAvailableError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// A file could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace illum
