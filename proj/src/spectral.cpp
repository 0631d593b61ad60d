#include "psskm/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

namespace psskm {

NonSymmetric::NonSymmetric() : Error("matrix is not symmetric") {}

SpectralReport eigen_spectrum(const Eigen::MatrixXd& K, double tol) {
  if (!check_symmetry(K)) throw NonSymmetric();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K,
                                                        Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigs = solver.eigenvalues();  // ascending

  SpectralReport report;
  report.is_symmetric = true;
  report.tol = tol;
  report.min_eigenvalue = eigs(0);
  report.max_eigenvalue = eigs(eigs.size() - 1);

  const double negative_floor = -tol * std::max(1.0, report.max_eigenvalue);
  const double rank_floor = tol * report.max_eigenvalue;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) < negative_floor) ++report.num_negative_eigenvalues;
    if (eigs(i) > rank_floor) ++report.rank_estimate;
  }
  report.psd_within_tol = report.min_eigenvalue >= negative_floor;
  return report;
}

namespace {

// Flips v so its largest-magnitude entry (first index on ties) is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double best_abs = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v(best) < 0.0) v = -v;
}

}  // namespace

EmbeddingMatrix kpca_embed(const Eigen::MatrixXd& K, Eigen::Index d,
                           bool clip_negative, std::vector<std::string> ids) {
  if (!check_symmetry(K)) throw NonSymmetric();
  const Eigen::Index n = K.rows();
  if (d < 1 || d > n) {
    throw Error("kpca_embed: requested components " + std::to_string(d) +
                " outside 1.." + std::to_string(n));
  }

  const Eigen::MatrixXd centered = center_kernel(K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
  const Eigen::VectorXd eigs = solver.eigenvalues();  // ascending

  // The clip floor is zero up to roundoff: eigenvalues the centering
  // annihilates come back as +-1e-16 noise and must not be retained.
  const double floor = 1e-12 * std::max(1.0, eigs(n - 1));

  Eigen::Index retained = 0;
  for (Eigen::Index r = 0; r < d; ++r) {
    const double lambda = eigs(n - 1 - r);
    if (lambda > floor) {
      ++retained;
    } else if (!clip_negative) {
      throw NegativeSpectrum("component " + std::to_string(r) +
                             " has eigenvalue " + std::to_string(lambda));
    }
  }

  EmbeddingMatrix e;
  e.ids = std::move(ids);
  e.requested_components = d;
  e.clipped_components = d - retained;
  e.coords.resize(n, retained);
  e.eigenvalues.resize(retained);
  for (Eigen::Index r = 0; r < retained; ++r) {
    const Eigen::Index src = n - 1 - r;
    const double lambda = eigs(src);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    fix_sign(v);
    e.eigenvalues(r) = lambda;
    e.coords.col(r) = std::sqrt(lambda) * v;
  }
  return e;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string spectral_report_text(const SpectralReport& r) {
  std::string out;
  out += "is_symmetric=" + std::string(r.is_symmetric ? "true" : "false") + "\n";
  out += "min_eigenvalue=" + fmt_double(r.min_eigenvalue) + "\n";
  out += "max_eigenvalue=" + fmt_double(r.max_eigenvalue) + "\n";
  out += "num_negative_eigenvalues=" + std::to_string(r.num_negative_eigenvalues) + "\n";
  out += "rank_estimate=" + std::to_string(r.rank_estimate) + "\n";
  out += "psd_within_tol=" + std::string(r.psd_within_tol ? "true" : "false") + "\n";
  out += "tol=" + fmt_double(r.tol) + "\n";
  return out;
}

std::string spectral_report_csv(const SpectralReport& r) {
  std::string out =
      "is_symmetric,min_eigenvalue,max_eigenvalue,num_negative_eigenvalues,"
      "rank_estimate,psd_within_tol,tol\n";
  out += std::string(r.is_symmetric ? "true" : "false") + ",";
  out += fmt_double(r.min_eigenvalue) + ",";
  out += fmt_double(r.max_eigenvalue) + ",";
  out += std::to_string(r.num_negative_eigenvalues) + ",";
  out += std::to_string(r.rank_estimate) + ",";
  out += std::string(r.psd_within_tol ? "true" : "false") + ",";
  out += fmt_double(r.tol) + "\n";
  return out;
}

void write_embeddings_csv(std::ostream& out, const EmbeddingMatrix& e) {
  out << "id";
  for (Eigen::Index j = 0; j < e.d(); ++j) out << ",c" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < e.n(); ++i) {
    out << (i < static_cast<Eigen::Index>(e.ids.size())
                ? e.ids[static_cast<std::size_t>(i)]
                : std::to_string(i));
    for (Eigen::Index j = 0; j < e.d(); ++j) out << ',' << fmt_double(e.coords(i, j));
    out << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& out, const EmbeddingMatrix& e) {
  out << "component,eigenvalue\n";
  for (Eigen::Index j = 0; j < e.d(); ++j) {
    out << j << ',' << fmt_double(e.eigenvalues(j)) << '\n';
  }
}

}  // namespace psskm
