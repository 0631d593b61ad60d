#include "psskm/pssm.hpp"

#include <ostream>

namespace psskm {

AllPadding::AllPadding() : Error("AllPadding: sequence has no residues") {}

Pssm compute_pssm(const Sequence& seq) {
  const Eigen::Index s = static_cast<Eigen::Index>(seq.residues.size());
  Pssm p;
  p.counts = Eigen::MatrixXi::Zero(s, kAlphabetSize);
  for (Eigen::Index i = 0; i < s; ++i) {
    const char c = seq.residues[static_cast<std::size_t>(i)];
    if (c == kPadSymbol) continue;  // pad rows stay all-zero
    p.counts(i, aa_index(c)) += 1;
  }
  return p;
}

WeightVector weight_vector(const Pssm& p) {
  const Eigen::VectorXi col_sums = p.counts.colwise().sum();
  const int total = col_sums.sum();
  if (total == 0) throw AllPadding();
  WeightVector wv;
  wv.w = col_sums.cast<double>() / static_cast<double>(total);
  return wv;
}

void write_pssm_csv(std::ostream& out, const Pssm& p) {
  for (int j = 0; j < kAlphabetSize; ++j) {
    out << (j ? "," : "") << kAminoAcids[static_cast<std::size_t>(j)];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < p.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.counts.cols(); ++j) {
      out << (j ? "," : "") << p.counts(i, j);
    }
    out << '\n';
  }
}

}  // namespace psskm
