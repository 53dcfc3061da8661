#pragma once

#include <stdexcept>

namespace smsd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// linear algebra
struct NotPositiveDefinite : Error { using Error::Error; };

// bit mapping
struct NonPowerOfTwo : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// closed-form analysis
struct DomainError : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// complexity accounting
struct RangeViolation : Error { using Error::Error; };

// sweep engine / IO
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace smsd
