#ifndef PSSKM_BASELINES_HPP
#define PSSKM_BASELINES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "psskm/errors.hpp"
#include "psskm/kernel.hpp"
#include "psskm/spectral.hpp"

namespace psskm {

struct InvalidKmerParams : Error {
  using Error::Error;
};

struct InvalidSpacedParams : Error {
  using Error::Error;
};

struct DimMismatch : Error {
  using Error::Error;
};

// Sparse counts over the 20^k k-mer index space.
struct SpectrumVector {
  int k = 0;
  std::map<std::uint64_t, int> counts;

  std::uint64_t dim() const;
  std::size_t total() const;
};

// Index of a k-mer string: base-20 digits in residue order, leftmost most
// significant.
std::uint64_t kmer_index(std::string_view kmer);
std::string kmer_string(std::uint64_t index, int k);

// Counts of all contiguous length-k substrings of the non-pad prefix.
// Requires 1 <= k <= 6; a prefix shorter than k yields the empty spectrum.
SpectrumVector kmer_spectrum(std::string_view residues, int k);

// Extracts every contiguous g-mer window from the non-pad prefix and counts
// one k-mer per window: its leading k characters. all_substrings instead
// counts every length-k substring of each window. Requires k < g.
SpectrumVector spaced_kmer_spectrum(std::string_view residues, int k, int g,
                                    bool all_substrings = false);

// exp(-gamma * ||u - v||^2) over the dense difference of the two spectra.
double gaussian_kernel(const SpectrumVector& u, const SpectrumVector& v,
                       double gamma);

// Conventional scale-free default, 1 / 20^k.
double default_gamma(int k);

// Feature-space distance induced by the Gaussian kernel value,
// sqrt(2 - 2 * gaussian_kernel(u, v, gamma)). Zero for identical spectra.
double gaussian_spectrum_distance(const SpectrumVector& u,
                                  const SpectrumVector& v, double gamma);

// sqrt(max(0, K[i][i] + K[j][j] - 2 K[i][j])).
double kernel_distance(const KernelMatrix& K, Eigen::Index i, Eigen::Index j);

// Mean pairwise cosine similarity between class embeddings, min-max
// normalized over the whole matrix to [0, 1]. A degenerate value range maps
// everything to 0.
struct ClassSimilarityMatrix {
  std::vector<std::string> classes;
  Eigen::MatrixXd values;  // C x C
  std::size_t excluded_rows = 0;  // zero-norm embedding rows left out
};

// Entry (a, b) averages cosine similarity over pairs (i in a, j in b),
// excluding i == j on the diagonal. A single-member class contributes its
// self-similarity of 1 on the diagonal.
ClassSimilarityMatrix class_similarity_heatmap(
    const EmbeddingMatrix& embedding, const std::vector<int>& label_ids,
    const std::vector<std::string>& class_names);

// index, k-mer string, count — one row per nonzero entry.
void write_spectrum_csv(std::ostream& out, const SpectrumVector& s);
// Class labels as header row and leading column, then C x C values.
void write_heatmap_csv(std::ostream& out, const ClassSimilarityMatrix& m);

}  // namespace psskm

#endif  // PSSKM_BASELINES_HPP
