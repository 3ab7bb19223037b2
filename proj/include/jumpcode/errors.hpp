#pragma once

#include <stdexcept>

namespace jumpcode {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidBasisState : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidQubitIndex : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct InvalidDuration : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct TooLargeForOracle : Error { using Error::Error; };
struct OddLengthUnsupported : Error { using Error::Error; };
struct InvalidParameters : Error { using Error::Error; };
struct RecoveryUnavailable : Error { using Error::Error; };
struct JumpAnnihilatesCode : Error { using Error::Error; };
struct NotRecoverable : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct InvalidSeed : Error { using Error::Error; };
struct SearchExhausted : Error { using Error::Error; };
struct MalformedInput : Error { using Error::Error; };

}  // namespace jumpcode
