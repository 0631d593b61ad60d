#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "psskm/kernel.hpp"
#include "psskm/rng.hpp"

using namespace psskm;

namespace {

double matrix_route(const std::string& a, const std::string& b) {
  const auto pa = compute_pssm({"a", a});
  const auto pb = compute_pssm({"b", b});
  return kernel_value(pa, weight_vector(pa), pb, weight_vector(pb));
}

double fast_route(const std::string& a, const std::string& b) {
  const auto wa = weight_vector(compute_pssm({"a", a}));
  const auto wb = weight_vector(compute_pssm({"b", b}));
  return kernel_value_fast(a, wa, b, wb);
}

}  // namespace

TEST_CASE("kernel value matches hand-derived pairs on both routes") {
  CHECK(matrix_route("AAAA", "AAAA") == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(fast_route("AAAA", "AAAA") == doctest::Approx(8.0).epsilon(1e-12));

  CHECK(matrix_route("AC", "AD") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fast_route("AC", "AD") == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(matrix_route("AC", "GT") == 0.0);
  CHECK(fast_route("AC", "GT") == 0.0);

  CHECK(matrix_route("ACD", "ACD") == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fast_route("ACD", "ACD") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pad positions contribute nothing") {
  // "A-" has a single residue, so its weight on A is 1; "AC" contributes 0.5.
  CHECK(fast_route("A-", "AC") == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(matrix_route("A-", "AC") == doctest::Approx(1.5).epsilon(1e-12));
  // Matching pad columns never count.
  CHECK(fast_route("A-", "C-") == 0.0);
}

TEST_CASE("length mismatch raises ShapeMismatch") {
  CHECK_THROWS_AS(matrix_route("AC", "ACD"), ShapeMismatch);
  CHECK_THROWS_AS(fast_route("AC", "ACD"), ShapeMismatch);
}

TEST_CASE("matrix route and closed form agree on random padded pairs") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t total = 5 + rng.below(46);
    const std::size_t pads_a = rng.below(2) ? rng.below(total - 1) : 0;
    const std::size_t pads_b = rng.below(2) ? rng.below(total - 1) : 0;
    const std::string a =
        fixtures::random_residues_padded(rng, total - pads_a, pads_a);
    const std::string b =
        fixtures::random_residues_padded(rng, total - pads_b, pads_b);
    const double slow = matrix_route(a, b);
    const double fast = fast_route(a, b);
    CHECK(std::abs(slow - fast) <= 1e-9 * std::max(1.0, slow));
  }
}

TEST_CASE("kernel_matrix on the two-sequence fixture") {
  const auto K = kernel_matrix(fixtures::make_dataset({"AC", "AD"}));
  REQUIRE(K.size() == 2);
  CHECK(K.values(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(K.values(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(K.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(K.values(1, 0) == K.values(0, 1));
  CHECK(K.ids == std::vector<std::string>{"r0", "r1"});
}

TEST_CASE("kernel_matrix single sequence hits the diagonal identity") {
  const auto K = kernel_matrix(fixtures::make_dataset({"KLM"}, {"x"}));
  REQUIRE(K.size() == 1);
  CHECK(K.values(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kernel_matrix with no shared positions is diagonal") {
  const auto K = kernel_matrix(fixtures::make_dataset({"AC", "GT"}));
  CHECK(K.values(0, 1) == 0.0);
  CHECK(K.values(1, 0) == 0.0);
  CHECK(K.values(0, 0) == doctest::Approx(2.0));
  CHECK(K.values(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("kernel_matrix rejects unpadded datasets and empty input") {
  CHECK_THROWS_AS(kernel_matrix(fixtures::make_dataset({"AC", "ACD"})),
                  ShapeMismatch);
  CHECK_THROWS_AS(kernel_matrix(LabeledDataset{}), Error);
}

TEST_CASE("kernel_matrix is bitwise symmetric and thread-count invariant") {
  Rng rng(7);
  const auto ds = fixtures::random_dataset(rng, 60, 33);
  const auto k1 = kernel_matrix(ds, 1);
  const auto k4 = kernel_matrix(ds, 4);
  const auto k9 = kernel_matrix(ds, 9);
  for (Eigen::Index i = 0; i < k1.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < k1.values.cols(); ++j) {
      CHECK(k1.values(i, j) == k1.values(j, i));
      CHECK(k1.values(i, j) == k4.values(i, j));
      CHECK(k1.values(i, j) == k9.values(i, j));
    }
  }

  std::ostringstream csv1, csv4;
  write_kernel_csv(csv1, k1);
  write_kernel_csv(csv4, k4);
  CHECK(csv1.str() == csv4.str());
}

TEST_CASE("diagonal identity against independent character counts") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 1 + rng.below(60);
    const std::size_t pads = rng.below(6);
    const std::string residues =
        fixtures::random_residues_padded(rng, len, pads);
    const double diag = fast_route(residues, residues);

    const auto counts = fixtures::count_residues(residues);
    double sum_sq = 0.0;
    for (const int c : counts) sum_sq += static_cast<double>(c) * c;
    const double expected = 2.0 / static_cast<double>(len) * sum_sq;
    CHECK(std::abs(diag - expected) <= 1e-9 * std::max(1.0, expected));
  }
}

TEST_CASE("permuting the dataset permutes the kernel matrix") {
  Rng rng(91);
  const auto ds = fixtures::random_dataset(rng, 12, 20);
  const auto K = kernel_matrix(ds);

  LabeledDataset reversed = ds;
  std::reverse(reversed.sequences.begin(), reversed.sequences.end());
  std::reverse(reversed.labels.begin(), reversed.labels.end());
  const auto Kr = kernel_matrix(reversed);

  const Eigen::Index n = K.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      CHECK(Kr.values(n - 1 - i, n - 1 - j) == K.values(i, j));
    }
  }
}

TEST_CASE("appending a matching position never lowers the kernel value") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + rng.below(30);
    const std::string a = fixtures::random_residues(rng, len);
    const std::string b = fixtures::random_residues(rng, len);
    const char extra = kAminoAcids[static_cast<std::size_t>(rng.below(20))];
    const double before = fast_route(a, b);
    const double after = fast_route(a + extra, b + extra);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("kernel csv round trip reproduces exact doubles") {
  Rng rng(3);
  const auto K = kernel_matrix(fixtures::random_dataset(rng, 9, 14));
  std::ostringstream out;
  write_kernel_csv(out, K);
  std::istringstream in(out.str());
  const auto back = read_kernel_csv(in);
  REQUIRE(back.size() == K.size());
  CHECK(back.ids == K.ids);
  for (Eigen::Index i = 0; i < K.size(); ++i) {
    for (Eigen::Index j = 0; j < K.size(); ++j) {
      CHECK(back.values(i, j) == K.values(i, j));
    }
  }
}
