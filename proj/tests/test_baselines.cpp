#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "psskm/baselines.hpp"
#include "psskm/rng.hpp"

using namespace psskm;

TEST_CASE("kmer_spectrum enumerates contiguous substrings") {
  const auto sv = kmer_spectrum("ACDA", 2);
  CHECK(sv.counts.size() == 3);
  CHECK(sv.counts.at(kmer_index("AC")) == 1);
  CHECK(sv.counts.at(kmer_index("CD")) == 1);
  CHECK(sv.counts.at(kmer_index("DA")) == 1);
  CHECK(sv.total() == 3);
}

TEST_CASE("kmer_spectrum counts repeats and handles short input") {
  const auto repeated = kmer_spectrum("AAA", 2);
  CHECK(repeated.counts.size() == 1);
  CHECK(repeated.counts.at(kmer_index("AA")) == 2);

  const auto empty = kmer_spectrum("AC", 3);
  CHECK(empty.counts.empty());
  CHECK(empty.total() == 0);
}

TEST_CASE("kmer_spectrum draws from the non-pad prefix only") {
  const auto padded = kmer_spectrum("ACDA--", 2);
  const auto plain = kmer_spectrum("ACDA", 2);
  CHECK(padded.counts == plain.counts);
}

TEST_CASE("kmer_spectrum validates k") {
  CHECK_THROWS_AS(kmer_spectrum("ACD", 0), InvalidKmerParams);
  CHECK_THROWS_AS(kmer_spectrum("ACD", 7), InvalidKmerParams);
}

TEST_CASE("kmer index and string are inverse; indices stay in range") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const std::string kmer =
        fixtures::random_residues(rng, static_cast<std::size_t>(k));
    const std::uint64_t idx = kmer_index(kmer);
    CHECK(idx < kmer_spectrum(kmer, k).dim());
    CHECK(kmer_string(idx, k) == kmer);
  }
  CHECK(kmer_index("A") == 0);
  CHECK(kmer_index("Y") == 19);
  CHECK(kmer_index("AC") == 1);
}

TEST_CASE("kmer counts sum to the enumeration total") {
  Rng rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 1 + rng.below(40);
    const std::size_t pads = rng.below(6);
    const std::string residues =
        fixtures::random_residues_padded(rng, len, pads);
    const int k = 1 + static_cast<int>(rng.below(4));
    const auto sv = kmer_spectrum(residues, k);
    const std::size_t expected =
        len >= static_cast<std::size_t>(k) ? len - static_cast<std::size_t>(k) + 1 : 0;
    CHECK(sv.total() == expected);
  }
}

TEST_CASE("spaced_kmer_spectrum takes the prefix of each window") {
  const auto sv = spaced_kmer_spectrum("ACDE", 2, 3);
  CHECK(sv.counts.size() == 2);
  CHECK(sv.counts.at(kmer_index("AC")) == 1);
  CHECK(sv.counts.at(kmer_index("CD")) == 1);

  const auto repeated = spaced_kmer_spectrum("AAAA", 2, 3);
  CHECK(repeated.counts.at(kmer_index("AA")) == 2);

  CHECK_THROWS_AS(spaced_kmer_spectrum("ACDE", 3, 3), InvalidSpacedParams);
  CHECK(spaced_kmer_spectrum("AC", 2, 3).counts.empty());
}

TEST_CASE("spaced_kmer_spectrum all-substrings mode") {
  const auto sv = spaced_kmer_spectrum("ACDE", 2, 3, /*all_substrings=*/true);
  CHECK(sv.counts.at(kmer_index("AC")) == 1);
  CHECK(sv.counts.at(kmer_index("CD")) == 2);
  CHECK(sv.counts.at(kmer_index("DE")) == 1);
}

TEST_CASE("gaussian_kernel hand values") {
  const auto u = kmer_spectrum("ACDA", 2);
  CHECK(gaussian_kernel(u, u, 3.5) == 1.0);
  const auto v = kmer_spectrum("CDAC", 2);
  CHECK(gaussian_kernel(u, v, 0.0) == 1.0);

  SpectrumVector a, b;
  a.k = 2;
  b.k = 2;
  a.counts[kmer_index("AC")] = 1;
  b.counts[kmer_index("CD")] = 1;
  CHECK(gaussian_kernel(a, b, 0.5) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  SpectrumVector c;
  c.k = 3;
  CHECK_THROWS_AS(gaussian_kernel(a, c, 1.0), DimMismatch);
}

TEST_CASE("gaussian_kernel is symmetric and lands in (0, 1]") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = kmer_spectrum(fixtures::random_residues(rng, 5 + rng.below(30)), 2);
    const auto v = kmer_spectrum(fixtures::random_residues(rng, 5 + rng.below(30)), 2);
    const double g_uv = gaussian_kernel(u, v, default_gamma(2));
    const double g_vu = gaussian_kernel(v, u, default_gamma(2));
    CHECK(g_uv == g_vu);
    CHECK(g_uv > 0.0);
    CHECK(g_uv <= 1.0);
  }
}

TEST_CASE("kernel_distance hand values and axioms") {
  KernelMatrix K;
  K.values = Eigen::MatrixXd(2, 2);
  K.values << 2, 1, 1, 2;
  K.ids = {"a", "b"};
  CHECK(kernel_distance(K, 0, 0) == 0.0);
  CHECK(kernel_distance(K, 0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(kernel_distance(K, 0, 1) == kernel_distance(K, 1, 0));

  K.values << 2, 0, 0, 2;
  CHECK(kernel_distance(K, 0, 1) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(kernel_distance(K, 0, 2), Error);
  CHECK_THROWS_AS(kernel_distance(K, -1, 0), Error);
}

TEST_CASE("kernel_distance obeys the triangle inequality on PSD matrices") {
  Rng rng(73);
  const auto ds = fixtures::random_dataset(rng, 15, 24);
  const auto K = kernel_matrix(ds);
  REQUIRE(eigen_spectrum(K).psd_within_tol);
  const Eigen::Index n = K.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        CHECK(kernel_distance(K, i, j) <=
              kernel_distance(K, i, l) + kernel_distance(K, l, j) + 1e-9);
      }
    }
  }
}

namespace {

EmbeddingMatrix embedding_from_rows(const std::vector<Eigen::VectorXd>& rows) {
  EmbeddingMatrix e;
  e.coords.resize(static_cast<Eigen::Index>(rows.size()), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    e.coords.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return e;
}

}  // namespace

TEST_CASE("heatmap on antiparallel classes normalizes to 1 within, 0 across") {
  Eigen::VectorXd e(2);
  e << 1.0, 2.0;
  const auto emb = embedding_from_rows({e, e, -e, -e});
  const auto hm = class_similarity_heatmap(emb, {0, 0, 1, 1}, {"a", "b"});
  CHECK(hm.values(0, 0) == doctest::Approx(1.0));
  CHECK(hm.values(1, 1) == doctest::Approx(1.0));
  CHECK(hm.values(0, 1) == doctest::Approx(0.0));
  CHECK(hm.values(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("heatmap degenerate range maps to zero") {
  Eigen::VectorXd e(2);
  e << 3.0, 4.0;
  const auto emb = embedding_from_rows({e, e, e, e});
  const auto hm = class_similarity_heatmap(emb, {0, 0, 1, 1}, {"a", "b"});
  CHECK(hm.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("heatmap single class is 1x1") {
  Eigen::VectorXd e(2);
  e << 1.0, 0.0;
  const auto emb = embedding_from_rows({e, e});
  const auto hm = class_similarity_heatmap(emb, {0, 0}, {"only"});
  CHECK(hm.values.rows() == 1);
  CHECK(hm.values.cols() == 1);
}

TEST_CASE("heatmap excludes zero-norm rows with a count") {
  Eigen::VectorXd e(2), z(2);
  e << 1.0, 2.0;
  z << 0.0, 0.0;
  const auto emb = embedding_from_rows({e, z, e, -e, -e});
  const auto hm = class_similarity_heatmap(emb, {0, 0, 0, 1, 1}, {"a", "b"});
  CHECK(hm.excluded_rows == 1);
  CHECK(hm.values(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("position-shuffled classes separate in kernel distance, not unigrams") {
  const auto ds = fixtures::permuted_composition_dataset(17, 10, 40);
  const auto K = kernel_matrix(ds);
  const auto ids = ds.label_ids();

  double within = 0.0, across = 0.0;
  std::size_t within_n = 0, across_n = 0;
  double max_unigram = 0.0;
  const double gamma = default_gamma(1);
  std::vector<SpectrumVector> unigrams;
  for (const auto& seq : ds.sequences) {
    unigrams.push_back(kmer_spectrum(seq.residues, 1));
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const double d = kernel_distance(K, static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j));
      if (ids[i] == ids[j]) {
        within += d;
        ++within_n;
      } else {
        across += d;
        ++across_n;
      }
      max_unigram = std::max(
          max_unigram, gaussian_spectrum_distance(unigrams[i], unigrams[j], gamma));
    }
  }
  CHECK(within / static_cast<double>(within_n) <
        across / static_cast<double>(across_n));
  CHECK(max_unigram <= 1e-9);
}

TEST_CASE("spectrum and heatmap csv writers") {
  std::ostringstream spec_out;
  write_spectrum_csv(spec_out, kmer_spectrum("ACDA", 2));
  CHECK(spec_out.str().rfind("index,kmer,count\n", 0) == 0);
  CHECK(spec_out.str().find("AC,1") != std::string::npos);

  Eigen::VectorXd e(2);
  e << 1.0, 2.0;
  const auto emb = embedding_from_rows({e, e, -e, -e});
  const auto hm = class_similarity_heatmap(emb, {0, 0, 1, 1}, {"a", "b"});
  std::ostringstream hm_out;
  write_heatmap_csv(hm_out, hm);
  CHECK(hm_out.str().rfind("class,a,b\n", 0) == 0);
}
