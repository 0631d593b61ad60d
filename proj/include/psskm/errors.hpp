#ifndef PSSKM_ERRORS_HPP
#define PSSKM_ERRORS_HPP

#include <stdexcept>

namespace psskm {

// Base of every library error, so the CLI boundary can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally broken input text (FASTA, TSV, CSV).
struct MalformedInput : Error {
  using Error::Error;
};

}  // namespace psskm

#endif  // PSSKM_ERRORS_HPP
