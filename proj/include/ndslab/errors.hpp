#pragma once

#include <stdexcept>
#include <string>

namespace ndslab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point, map image or operand does not belong to the expected domain,
// or operand dimensions/spaces do not match.
struct DomainError : Error {
    using Error::Error;
};

// Invalid configuration: bad resolution, non-increasing gamma, malformed
// scenario, unknown task name, missing declared limit, ...
struct ConfigError : Error {
    using Error::Error;
};

// A set-valued operation received an empty set.
struct EmptySetError : Error {
    using Error::Error;
};

// A sequence index has no map (finite explicit list without tail rule).
struct IndexError : Error {
    using Error::Error;
};

} // namespace ndslab
