#include "psskm/kernel.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <thread>

namespace psskm {

double kernel_value(const Pssm& p1, const WeightVector& w1,
                    const Pssm& p2, const WeightVector& w2) {
  if (p1.counts.rows() != p2.counts.rows()) {
    throw ShapeMismatch("kernel_value: position matrices have different lengths (" +
                        std::to_string(p1.counts.rows()) + " vs " +
                        std::to_string(p2.counts.rows()) + ")");
  }
  const Eigen::MatrixXd product =
      p1.counts.cast<double>().cwiseProduct(p2.counts.cast<double>());
  const Eigen::VectorXd a = product * w1.w;
  const Eigen::VectorXd b = product * w2.w;
  return (a + b).sum();
}

double kernel_value_fast(std::string_view residues1, const WeightVector& w1,
                         std::string_view residues2, const WeightVector& w2) {
  if (residues1.size() != residues2.size()) {
    throw ShapeMismatch("kernel_value_fast: sequence lengths differ (" +
                        std::to_string(residues1.size()) + " vs " +
                        std::to_string(residues2.size()) + "), was padding skipped?");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < residues1.size(); ++i) {
    const char c = residues1[i];
    if (c != residues2[i]) continue;
    const int idx = aa_index_or_neg(c);
    if (idx < 0) continue;  // pads never match
    acc += w1.w[idx] + w2.w[idx];
  }
  return acc;
}

namespace {

struct SequenceCache {
  // Residue column index per position, -1 for pads.
  std::vector<std::vector<std::int8_t>> codes;
  std::vector<WeightVector> weights;
};

SequenceCache build_cache(const LabeledDataset& ds) {
  SequenceCache cache;
  cache.codes.reserve(ds.size());
  cache.weights.reserve(ds.size());
  for (const auto& seq : ds.sequences) {
    const Pssm p = compute_pssm(seq);
    cache.weights.push_back(weight_vector(p));
    std::vector<std::int8_t> code(seq.residues.size());
    for (std::size_t i = 0; i < seq.residues.size(); ++i) {
      code[i] = static_cast<std::int8_t>(aa_index_or_neg(seq.residues[i]));
    }
    cache.codes.push_back(std::move(code));
  }
  return cache;
}

double pair_value(const std::vector<std::int8_t>& a, const WeightVector& wa,
                  const std::vector<std::int8_t>& b, const WeightVector& wb) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int8_t c = a[i];
    if (c >= 0 && c == b[i]) acc += wa.w[c] + wb.w[c];
  }
  return acc;
}

// Fills upper-triangle cells for flattened pair indices [begin, end).
// Pairs (i, j) with i <= j are flattened row-major: row i starts at
// i*n - i*(i-1)/2.
void fill_chunk(const SequenceCache& cache, Eigen::MatrixXd& values,
                std::uint64_t begin, std::uint64_t end) {
  const std::uint64_t n = static_cast<std::uint64_t>(values.rows());
  std::uint64_t i = 0;
  std::uint64_t row_start = 0;
  while (row_start + (n - i) <= begin) {
    row_start += n - i;
    ++i;
  }
  std::uint64_t j = i + (begin - row_start);
  for (std::uint64_t t = begin; t < end; ++t) {
    values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        pair_value(cache.codes[i], cache.weights[i], cache.codes[j],
                   cache.weights[j]);
    if (++j == n) {
      ++i;
      j = i;
    }
  }
}

}  // namespace

KernelMatrix kernel_matrix(const LabeledDataset& ds, int threads) {
  const std::uint64_t n = ds.size();
  if (n == 0) throw Error("kernel_matrix: empty dataset");
  const std::size_t common = ds.sequences.front().residues.size();
  for (const auto& seq : ds.sequences) {
    if (seq.residues.size() != common) {
      throw ShapeMismatch("kernel_matrix: sequence '" + seq.id +
                          "' has length " + std::to_string(seq.residues.size()) +
                          ", expected " + std::to_string(common) +
                          " (pad the dataset first)");
    }
  }

  const SequenceCache cache = build_cache(ds);

  KernelMatrix k;
  k.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  k.ids.reserve(n);
  for (const auto& seq : ds.sequences) k.ids.push_back(seq.id);

  const std::uint64_t total_pairs = n * (n + 1) / 2;
  std::uint64_t workers = threads > 0
                              ? static_cast<std::uint64_t>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::uint64_t>(workers, total_pairs);

  if (workers <= 1) {
    fill_chunk(cache, k.values, 0, total_pairs);
  } else {
    const std::uint64_t chunk = (total_pairs + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(begin + chunk, total_pairs);
      if (begin >= end) break;
      pool.emplace_back([&cache, &k, begin, end] {
        fill_chunk(cache, k.values, begin, end);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Mirror the lower triangle from the computed upper triangle.
  for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < k.values.rows(); ++i) {
      k.values(i, j) = k.values(j, i);
    }
  }
  return k;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void write_kernel_csv(std::ostream& out, const KernelMatrix& k) {
  std::string line = "#ids";
  for (const auto& id : k.ids) {
    line += ',';
    line += id;
  }
  line += '\n';
  out << line;
  for (Eigen::Index i = 0; i < k.values.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < k.values.cols(); ++j) {
      if (j) line += ',';
      append_double(line, k.values(i, j));
    }
    line += '\n';
    out << line;
  }
}

KernelMatrix read_kernel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#ids", 0) != 0) {
    throw MalformedInput("kernel CSV must start with an #ids header");
  }
  KernelMatrix k;
  std::size_t pos = 4;
  while (pos < line.size() && line[pos] == ',') {
    std::size_t next = line.find(',', pos + 1);
    if (next == std::string::npos) next = line.size();
    k.ids.push_back(line.substr(pos + 1, next - pos - 1));
    pos = next;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(k.ids.size());
  k.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw MalformedInput("kernel CSV truncated at row " + std::to_string(i));
    }
    const char* p = line.c_str();
    for (Eigen::Index j = 0; j < n; ++j) {
      char* end = nullptr;
      k.values(i, j) = std::strtod(p, &end);
      if (end == p) {
        throw MalformedInput("kernel CSV parse error at row " + std::to_string(i));
      }
      p = (*end == ',') ? end + 1 : end;
    }
  }
  return k;
}

}  // namespace psskm
