#include "psskm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace psskm {

namespace {

constexpr int kMaxK = 6;  // 20^6 = 6.4e7 keeps indices well inside 64 bits

std::uint64_t pow20(int k) {
  std::uint64_t d = 1;
  for (int i = 0; i < k; ++i) d *= 20;
  return d;
}

}  // namespace

std::uint64_t SpectrumVector::dim() const { return pow20(k); }

std::size_t SpectrumVector::total() const {
  std::size_t sum = 0;
  for (const auto& [idx, count] : counts) sum += static_cast<std::size_t>(count);
  return sum;
}

std::uint64_t kmer_index(std::string_view kmer) {
  std::uint64_t idx = 0;
  for (const char c : kmer) {
    idx = idx * 20 + static_cast<std::uint64_t>(aa_index(c));
  }
  return idx;
}

std::string kmer_string(std::uint64_t index, int k) {
  std::string s(static_cast<std::size_t>(k), 'A');
  for (int t = k - 1; t >= 0; --t) {
    s[static_cast<std::size_t>(t)] =
        kAminoAcids[static_cast<std::size_t>(index % 20)];
    index /= 20;
  }
  return s;
}

SpectrumVector kmer_spectrum(std::string_view residues, int k) {
  if (k < 1 || k > kMaxK) {
    throw InvalidKmerParams("k must be in 1.." + std::to_string(kMaxK) +
                            ", got " + std::to_string(k));
  }
  SpectrumVector sv;
  sv.k = k;
  const std::size_t real_len = non_pad_length(residues);
  if (real_len < static_cast<std::size_t>(k)) return sv;
  for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= real_len; ++i) {
    ++sv.counts[kmer_index(residues.substr(i, static_cast<std::size_t>(k)))];
  }
  return sv;
}

SpectrumVector spaced_kmer_spectrum(std::string_view residues, int k, int g,
                                    bool all_substrings) {
  if (k >= g) {
    throw InvalidSpacedParams("spaced k-mers require k < g, got k=" +
                              std::to_string(k) + " g=" + std::to_string(g));
  }
  if (k < 1 || k > kMaxK) {
    throw InvalidKmerParams("k must be in 1.." + std::to_string(kMaxK) +
                            ", got " + std::to_string(k));
  }
  SpectrumVector sv;
  sv.k = k;
  const std::size_t real_len = non_pad_length(residues);
  if (real_len < static_cast<std::size_t>(g)) return sv;
  for (std::size_t i = 0; i + static_cast<std::size_t>(g) <= real_len; ++i) {
    const std::string_view gmer = residues.substr(i, static_cast<std::size_t>(g));
    if (all_substrings) {
      for (std::size_t t = 0; t + static_cast<std::size_t>(k) <= gmer.size(); ++t) {
        ++sv.counts[kmer_index(gmer.substr(t, static_cast<std::size_t>(k)))];
      }
    } else {
      ++sv.counts[kmer_index(gmer.substr(0, static_cast<std::size_t>(k)))];
    }
  }
  return sv;
}

double default_gamma(int k) { return 1.0 / static_cast<double>(pow20(k)); }

double gaussian_kernel(const SpectrumVector& u, const SpectrumVector& v,
                       double gamma) {
  if (u.k != v.k) {
    throw DimMismatch("spectra have different k: " + std::to_string(u.k) +
                      " vs " + std::to_string(v.k));
  }
  if (gamma < 0.0) throw Error("gaussian_kernel: gamma must be >= 0");

  double sq_dist = 0.0;
  auto iu = u.counts.begin();
  auto iv = v.counts.begin();
  while (iu != u.counts.end() || iv != v.counts.end()) {
    double diff = 0.0;
    if (iv == v.counts.end() || (iu != u.counts.end() && iu->first < iv->first)) {
      diff = static_cast<double>(iu->second);
      ++iu;
    } else if (iu == u.counts.end() || iv->first < iu->first) {
      diff = -static_cast<double>(iv->second);
      ++iv;
    } else {
      diff = static_cast<double>(iu->second - iv->second);
      ++iu;
      ++iv;
    }
    sq_dist += diff * diff;
  }
  return std::exp(-gamma * sq_dist);
}

double gaussian_spectrum_distance(const SpectrumVector& u,
                                  const SpectrumVector& v, double gamma) {
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * gaussian_kernel(u, v, gamma)));
}

double kernel_distance(const KernelMatrix& K, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= K.size() || j >= K.size()) {
    throw Error("kernel_distance: index out of range");
  }
  const double sq = K.values(i, i) + K.values(j, j) - 2.0 * K.values(i, j);
  return std::sqrt(std::max(0.0, sq));
}

ClassSimilarityMatrix class_similarity_heatmap(
    const EmbeddingMatrix& embedding, const std::vector<int>& label_ids,
    const std::vector<std::string>& class_names) {
  const Eigen::Index n = embedding.n();
  if (static_cast<std::size_t>(n) != label_ids.size()) {
    throw Error("class_similarity_heatmap: labels do not match embedding rows");
  }
  const int num_classes = static_cast<int>(class_names.size());

  ClassSimilarityMatrix result;
  result.classes = class_names;

  std::vector<std::vector<Eigen::Index>> members(
      static_cast<std::size_t>(num_classes));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (embedding.coords.row(i).norm() == 0.0) {
      ++result.excluded_rows;
      continue;
    }
    members[static_cast<std::size_t>(label_ids[static_cast<std::size_t>(i)])]
        .push_back(i);
  }
  for (int c = 0; c < num_classes; ++c) {
    if (members[static_cast<std::size_t>(c)].empty()) {
      throw Error("class_similarity_heatmap: class '" +
                  class_names[static_cast<std::size_t>(c)] +
                  "' has no usable embedding rows");
    }
  }

  auto cosine = [&](Eigen::Index i, Eigen::Index j) {
    const auto ri = embedding.coords.row(i);
    const auto rj = embedding.coords.row(j);
    return ri.dot(rj) / (ri.norm() * rj.norm());
  };

  Eigen::MatrixXd raw(num_classes, num_classes);
  for (int a = 0; a < num_classes; ++a) {
    for (int b = a; b < num_classes; ++b) {
      const auto& ma = members[static_cast<std::size_t>(a)];
      const auto& mb = members[static_cast<std::size_t>(b)];
      double sum = 0.0;
      std::size_t pairs = 0;
      for (const Eigen::Index i : ma) {
        for (const Eigen::Index j : mb) {
          if (a == b && i == j) continue;
          sum += cosine(i, j);
          ++pairs;
        }
      }
      // A single-member class has no distinct pairs; use self-similarity.
      const double mean = pairs > 0 ? sum / static_cast<double>(pairs) : 1.0;
      raw(a, b) = mean;
      raw(b, a) = mean;
    }
  }

  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  if (hi > lo) {
    result.values = (raw.array() - lo) / (hi - lo);
  } else {
    result.values = Eigen::MatrixXd::Zero(num_classes, num_classes);
  }
  return result;
}

namespace {
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_spectrum_csv(std::ostream& out, const SpectrumVector& s) {
  out << "index,kmer,count\n";
  for (const auto& [idx, count] : s.counts) {
    out << idx << ',' << kmer_string(idx, s.k) << ',' << count << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const ClassSimilarityMatrix& m) {
  out << "class";
  for (const auto& name : m.classes) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out << m.classes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      out << ',' << fmt_double(m.values(i, j));
    }
    out << '\n';
  }
}

}  // namespace psskm
