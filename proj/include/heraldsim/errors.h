#pragma once

#include <stdexcept>
#include <string>

namespace heraldsim {

/// A physical or numerical parameter is outside its allowed range.
class ParameterError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Two states (or a state and an operation) disagree on mode count or cutoffs.
class ShapeError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures of the numerical validation checks (tails, norms, heralds).
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The photon-number truncation discards more weight than allowed.
class TruncationError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// A heralding event with (numerically) zero success probability was requested.
class HeraldError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace heraldsim
