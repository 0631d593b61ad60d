#ifndef PSSKM_KERNEL_HPP
#define PSSKM_KERNEL_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psskm/errors.hpp"
#include "psskm/pssm.hpp"
#include "psskm/sequence.hpp"

namespace psskm {

struct ShapeMismatch : Error {
  using Error::Error;
};

// Dense symmetric matrix of pairwise kernel values in dataset order.
struct KernelMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> ids;

  Eigen::Index size() const { return values.rows(); }
};

// Kernel value through the explicit matrix route: the element-wise product
// of the two position matrices is multiplied by each weight vector in turn
// and the resulting position contributions are summed.
double kernel_value(const Pssm& p1, const WeightVector& w1,
                    const Pssm& p2, const WeightVector& w2);

// Closed-form equivalent of kernel_value: every position where the two
// sequences carry the same non-pad residue contributes w1[aa] + w2[aa].
// This is the production path for matrix builds.
double kernel_value_fast(std::string_view residues1, const WeightVector& w1,
                         std::string_view residues2, const WeightVector& w2);

// Full symmetric matrix over the dataset. Upper-triangle pairs are split
// into contiguous chunks of flattened indices across threads, each worker
// writing only its own cells; the lower triangle is mirrored in a post-pass.
// The result is identical for any thread count. threads <= 0 selects the
// hardware concurrency.
KernelMatrix kernel_matrix(const LabeledDataset& ds, int threads = 0);

// First line "#ids,<id0>,...", then n rows of n values with 17 significant
// digits so a read-back reproduces the exact doubles.
void write_kernel_csv(std::ostream& out, const KernelMatrix& k);
KernelMatrix read_kernel_csv(std::istream& in);

}  // namespace psskm

#endif  // PSSKM_KERNEL_HPP
