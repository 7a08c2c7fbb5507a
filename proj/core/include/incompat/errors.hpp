#ifndef INCOMPAT_ERRORS_HPP
#define INCOMPAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace incompat {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension / index mismatch between operands.
struct ShapeError : Error {
  using Error::Error;
};

// Input fails a constructor or precondition check (hermiticity, positivity,
// stochasticity, completeness, domain ranges, malformed files, ...).
struct ValidationError : Error {
  using Error::Error;
};

// An iterative routine failed to converge or produced non-finite values.
struct NumericalError : Error {
  using Error::Error;
};

// A matrix that must be invertible (up to the stated cutoff) is not.
struct RankError : Error {
  using Error::Error;
};

// Asked to certify with a machinery whose guarantee does not hold
// (e.g. a roof that is only a sampled lower bound).
struct SoundnessError : Error {
  using Error::Error;
};

// Root finder got a bracket without a sign change.
struct BracketError : Error {
  using Error::Error;
};

} // namespace incompat

#endif
