#ifndef PSSKM_SPECTRAL_HPP
#define PSSKM_SPECTRAL_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "psskm/errors.hpp"
#include "psskm/kernel.hpp"

namespace psskm {

struct NonSymmetric : Error {
  NonSymmetric();
};

struct NegativeSpectrum : Error {
  using Error::Error;
};

// Empirical Mercer diagnostics of one kernel matrix.
struct SpectralReport {
  bool is_symmetric = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  // Eigenvalues below -tol * max(1, max_eigenvalue), i.e. materially
  // negative rather than roundoff.
  Eigen::Index num_negative_eigenvalues = 0;
  // Eigenvalues above tol * max_eigenvalue.
  Eigen::Index rank_estimate = 0;
  bool psd_within_tol = false;
  double tol = 1e-8;
};

// True iff max |K - K^T| is exactly zero.
template <typename Derived>
bool check_symmetry(const Eigen::MatrixBase<Derived>& K) {
  const auto& m = K.derived();
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      if (m(i, j) != m(j, i)) return false;
    }
  }
  return true;
}

inline bool check_symmetry(const KernelMatrix& K) {
  return check_symmetry(K.values);
}

// Full symmetric eigendecomposition of K. Throws NonSymmetric unless K is
// exactly symmetric.
SpectralReport eigen_spectrum(const Eigen::MatrixXd& K, double tol = 1e-8);
inline SpectralReport eigen_spectrum(const KernelMatrix& K, double tol = 1e-8) {
  return eigen_spectrum(K.values, tol);
}

// Double-centering: K - rowMean - colMean + grandMean per entry. Every row
// and column of the result sums to zero up to roundoff.
template <typename Derived>
Eigen::MatrixXd center_kernel(const Eigen::MatrixBase<Derived>& K) {
  const Eigen::MatrixXd m = K.derived();
  const Eigen::VectorXd row_mean = m.rowwise().mean();
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  const double grand_mean = row_mean.mean();
  Eigen::MatrixXd centered = m;
  centered.array().colwise() -= row_mean.array();
  centered.array().rowwise() -= col_mean.array();
  centered.array() += grand_mean;
  return centered;
}

inline Eigen::MatrixXd center_kernel(const KernelMatrix& K) {
  return center_kernel(K.values);
}

// Kernel-PCA coordinates. Column j is sqrt(lambda_j) * v_j with v_j a unit
// eigenvector of the centered kernel, so the squared norm of column j equals
// the retained eigenvalue. Eigenvector signs follow a fixed rule: the
// largest-magnitude entry (first index on ties) is made positive.
struct EmbeddingMatrix {
  Eigen::MatrixXd coords;       // n x d
  Eigen::VectorXd eigenvalues;  // d retained values, descending
  std::vector<std::string> ids;
  Eigen::Index requested_components = 0;
  Eigen::Index clipped_components = 0;  // requested minus retained

  Eigen::Index n() const { return coords.rows(); }
  Eigen::Index d() const { return coords.cols(); }
};

// Centers K, decomposes it, and keeps the top d eigenpairs with eigenvalue
// above zero (a roundoff-relative floor, so the dimension centering removes
// is never retained). With clip_negative the result may carry fewer than d
// columns (clipped_components reports how many were dropped); without it any
// non-positive eigenvalue among the top d raises NegativeSpectrum.
EmbeddingMatrix kpca_embed(const Eigen::MatrixXd& K, Eigen::Index d,
                           bool clip_negative = true,
                           std::vector<std::string> ids = {});
inline EmbeddingMatrix kpca_embed(const KernelMatrix& K, Eigen::Index d,
                                  bool clip_negative = true) {
  return kpca_embed(K.values, d, clip_negative, K.ids);
}

// key=value lines, one per report field.
std::string spectral_report_text(const SpectralReport& r);
// Header line plus one CSV data row.
std::string spectral_report_csv(const SpectralReport& r);

// Header "id,c0,...,c{d-1}", one row per sequence.
void write_embeddings_csv(std::ostream& out, const EmbeddingMatrix& e);
// Header "component,eigenvalue", one row per retained component.
void write_eigenvalues_csv(std::ostream& out, const EmbeddingMatrix& e);

}  // namespace psskm

#endif  // PSSKM_SPECTRAL_HPP
