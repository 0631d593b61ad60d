#ifndef PSSKM_PSSM_HPP
#define PSSKM_PSSM_HPP

#include <Eigen/Core>
#include <iosfwd>

#include "psskm/alphabet.hpp"
#include "psskm/errors.hpp"
#include "psskm/sequence.hpp"

namespace psskm {

struct AllPadding : Error {
  AllPadding();
};

// Positional indicator counts: one row per position, one column per residue.
// Real positions are one-hot rows; pad positions are all-zero rows, so pads
// contribute nothing to any product or sum built from the matrix.
struct Pssm {
  Eigen::MatrixXi counts;  // seq_len x 20
  Eigen::Index seq_len() const { return counts.rows(); }
};

// Residue frequencies of one sequence, normalized to sum 1 over the non-pad
// prefix.
struct WeightVector {
  Eigen::Matrix<double, kAlphabetSize, 1> w =
      Eigen::Matrix<double, kAlphabetSize, 1>::Zero();
};

Pssm compute_pssm(const Sequence& seq);

// Column sums of the counts divided by their total. Throws AllPadding when
// every row is zero.
WeightVector weight_vector(const Pssm& p);

// Debug dump: header row of residue symbols, then one row per position.
void write_pssm_csv(std::ostream& out, const Pssm& p);

}  // namespace psskm

#endif  // PSSKM_PSSM_HPP
