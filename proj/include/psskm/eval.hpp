#ifndef PSSKM_EVAL_HPP
#define PSSKM_EVAL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psskm/errors.hpp"
#include "psskm/sequence.hpp"
#include "psskm/spectral.hpp"

namespace psskm {

struct StratificationImpossible : Error {
  explicit StratificationImpossible(const std::string& class_name);
};

struct Diverged : Error {
  explicit Diverged(double lr);
};

// Train/test index partition preserving per-class proportions within one
// sample. Membership is decided by shuffling each class with Rng(seed);
// the index lists themselves are emitted in ascending order.
struct SplitPlan {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
  double train_frac = 0.7;
};

SplitPlan stratified_split(const std::vector<int>& label_ids,
                           const std::vector<std::string>& class_names,
                           double train_frac, std::uint64_t seed);

// Predicted class ids plus one score row per test point; rows sum to 1.
struct Prediction {
  std::vector<int> labels;
  Eigen::MatrixXd scores;
};

// Euclidean k-nearest-neighbor majority vote. Scores are per-class vote
// fractions. Vote ties break to the smallest mean neighbor distance, then
// to the smaller class index.
Prediction knn_predict(const Eigen::MatrixXd& train_points,
                       const std::vector<int>& train_labels, int num_classes,
                       const Eigen::MatrixXd& test_points, int k);

// Per-class centroids; nearest wins, ties to the smaller class index.
// Scores are a stable softmin of the centroid distances.
Prediction nearest_centroid_predict(const Eigen::MatrixXd& train_points,
                                    const std::vector<int>& train_labels,
                                    int num_classes,
                                    const Eigen::MatrixXd& test_points);

struct LogRegParams {
  double l2 = 1e-3;
  int epochs = 500;
  double lr = 0.1;
};

// Multinomial softmax regression, full-batch gradient descent from zero
// initialization; the L2 penalty applies to weights, not the intercept.
// Throws Diverged when the loss stops being finite.
Prediction logistic_regression(const Eigen::MatrixXd& train_points,
                               const std::vector<int>& train_labels,
                               int num_classes,
                               const Eigen::MatrixXd& test_points,
                               const LogRegParams& params = {});

struct MetricRecord {
  double accuracy = 0.0;
  double precision_weighted = 0.0;
  double recall_weighted = 0.0;
  double f1_weighted = 0.0;
  double f1_macro = 0.0;
  double roc_auc_ovr = 0.0;
  double train_time_seconds = 0.0;
};

struct MetricDiagnostics {
  // Classes whose precision or F1 hit a 0/0 and were scored 0.
  int zero_division_classes = 0;
  // Classes left out of the one-vs-rest AUC average (no positives or no
  // negatives in y_true).
  int auc_excluded_classes = 0;
};

// One-vs-rest trapezoidal ROC AUC of a single score column. is_positive
// holds 0/1 per sample. Score ties are swept as one threshold group, so an
// uninformative column scores exactly 0.5.
double binary_roc_auc(const std::vector<int>& is_positive,
                      const Eigen::VectorXd& scores);

// Accuracy, support-weighted precision/recall/F1, macro F1 over classes
// present in y_true, and macro-averaged one-vs-rest ROC AUC. Score rows
// must sum to 1 within 1e-6. train_time_seconds is left at zero.
MetricRecord compute_metrics(const std::vector<int>& y_true,
                             const std::vector<int>& y_pred,
                             const Eigen::MatrixXd& scores,
                             MetricDiagnostics* diag = nullptr);

enum class ClassifierKind { kKnn, kNearestCentroid, kLogisticRegression };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kKnn;
  int knn_k = 5;
  LogRegParams logreg;
};

std::string classifier_name(const ClassifierSpec& spec);

struct EvalOptions {
  Eigen::Index kpca_components = 50;
  bool clip_negative = true;
  double train_frac = 0.7;
  int threads = 0;
};

// Per-run metrics plus population mean / standard deviation per column.
struct EvalReport {
  std::string classifier;
  std::vector<MetricRecord> per_run;
  std::vector<std::uint64_t> seeds;
  MetricRecord mean;
  MetricRecord stddev;
};

void finalize_report(EvalReport& report);

// One evaluation run per seed on a fixed embedding: stratified split by
// rows, fit, predict, metrics. Fit wall time fills train_time_seconds.
EvalReport repeated_eval_on_embedding(const Eigen::MatrixXd& coords,
                                      const std::vector<int>& label_ids,
                                      const std::vector<std::string>& class_names,
                                      const ClassifierSpec& spec,
                                      const std::vector<std::uint64_t>& seeds,
                                      double train_frac);

// Full pipeline: kernel matrix, kernel-PCA embedding of the whole dataset,
// then repeated_eval_on_embedding with seeds base_seed + run index. The
// embedding is computed once on all rows and split per run (transductive).
EvalReport repeated_eval(const LabeledDataset& ds, const ClassifierSpec& spec,
                         int runs, std::uint64_t base_seed,
                         const EvalOptions& options = {});

// Machine CSV: one row per (classifier, run) and mean/std rows. Metric
// column order: accuracy, prec_w, recall_w, f1_w, f1_macro, roc_auc,
// train_time.
void write_report_csv(std::ostream& out, const std::vector<EvalReport>& reports);

// Human-readable fixed-width table of the same content.
std::string report_table(const std::vector<EvalReport>& reports);

}  // namespace psskm

#endif  // PSSKM_EVAL_HPP
