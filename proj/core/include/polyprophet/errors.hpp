#pragma once

#include <stdexcept>
#include <string>

namespace polyprophet {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed user input: distribution, submodular spec, or config file.
struct ValidationError : Error {
  using Error::Error;
};

// Exact-mode computation requested where only sampling is possible
// (a continuous distribution in the mix).
struct UnsupportedExact : Error {
  using Error::Error;
};

// Enumeration or search space exceeds the configured cap.
struct TooLarge : Error {
  using Error::Error;
};

// Input sequence breaks the adversary contract: an element repeated,
// or the copies of a block not presented consecutively.
struct AdversaryContractViolation : Error {
  using Error::Error;
};

// Distribution family outside what closed-form virtual values support.
struct UnsupportedFamily : Error {
  using Error::Error;
};

// Operation precondition violated, e.g. a dependent set where an
// independent one is required.
struct PreconditionError : Error {
  using Error::Error;
};

// next_block called after every block has been presented.
struct ExhaustedError : Error {
  using Error::Error;
};

}  // namespace polyprophet
