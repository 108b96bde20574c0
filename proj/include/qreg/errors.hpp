#pragma once

#include <stdexcept>
#include <string>

// Error types shared across the library. Plain invalid arguments use
// std::invalid_argument; the types below mark conditions a caller may
// want to handle separately.
namespace qreg {

struct DegenerateTargetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndefinedCorrelationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnderdeterminedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegeneratePairError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qreg
