#include "psskm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "psskm/kernel.hpp"
#include "psskm/rng.hpp"

namespace psskm {

StratificationImpossible::StratificationImpossible(const std::string& class_name)
    : Error("StratificationImpossible: class '" + class_name +
            "' needs at least 2 members") {}

Diverged::Diverged(double lr)
    : Error("logistic regression diverged (non-finite loss) at lr=" +
            std::to_string(lr)) {}

SplitPlan stratified_split(const std::vector<int>& label_ids,
                           const std::vector<std::string>& class_names,
                           double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw Error("train_frac must be in (0, 1)");
  }
  const int num_classes = static_cast<int>(class_names.size());
  std::vector<std::vector<std::size_t>> by_class(
      static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < label_ids.size(); ++i) {
    by_class.at(static_cast<std::size_t>(label_ids[i])).push_back(i);
  }

  SplitPlan plan;
  plan.seed = seed;
  plan.train_frac = train_frac;
  Rng rng(seed);
  for (int c = 0; c < num_classes; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    if (members.size() < 2) {
      throw StratificationImpossible(class_names[static_cast<std::size_t>(c)]);
    }
    rng.shuffle(members);
    const auto count = static_cast<std::size_t>(members.size());
    auto train_count = static_cast<std::size_t>(
        std::llround(train_frac * static_cast<double>(count)));
    train_count = std::clamp<std::size_t>(train_count, 1, count - 1);
    for (std::size_t i = 0; i < count; ++i) {
      (i < train_count ? plan.train_indices : plan.test_indices)
          .push_back(members[i]);
    }
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

Prediction knn_predict(const Eigen::MatrixXd& train_points,
                       const std::vector<int>& train_labels, int num_classes,
                       const Eigen::MatrixXd& test_points, int k) {
  const Eigen::Index n_train = train_points.rows();
  if (n_train == 0) throw Error("knn_predict: empty training set");
  if (k < 1 || k > n_train) {
    throw Error("knn_predict: k=" + std::to_string(k) + " outside 1.." +
                std::to_string(n_train));
  }

  Prediction pred;
  pred.labels.resize(static_cast<std::size_t>(test_points.rows()));
  pred.scores = Eigen::MatrixXd::Zero(test_points.rows(), num_classes);

  std::vector<std::pair<double, Eigen::Index>> order(
      static_cast<std::size_t>(n_train));
  for (Eigen::Index q = 0; q < test_points.rows(); ++q) {
    for (Eigen::Index t = 0; t < n_train; ++t) {
      order[static_cast<std::size_t>(t)] = {
          (train_points.row(t) - test_points.row(q)).norm(), t};
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    std::vector<int> votes(static_cast<std::size_t>(num_classes), 0);
    std::vector<double> dist_sum(static_cast<std::size_t>(num_classes), 0.0);
    for (int i = 0; i < k; ++i) {
      const auto c = static_cast<std::size_t>(
          train_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second)]);
      ++votes[c];
      dist_sum[c] += order[static_cast<std::size_t>(i)].first;
    }

    int best = -1;
    for (int c = 0; c < num_classes; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      if (votes[cc] == 0) continue;
      if (best < 0 || votes[cc] > votes[static_cast<std::size_t>(best)]) {
        best = c;
        continue;
      }
      if (votes[cc] == votes[static_cast<std::size_t>(best)]) {
        const double mean_c = dist_sum[cc] / votes[cc];
        const double mean_b = dist_sum[static_cast<std::size_t>(best)] /
                              votes[static_cast<std::size_t>(best)];
        if (mean_c < mean_b) best = c;  // equal means keep the smaller index
      }
    }
    pred.labels[static_cast<std::size_t>(q)] = best;
    for (int c = 0; c < num_classes; ++c) {
      pred.scores(q, c) =
          static_cast<double>(votes[static_cast<std::size_t>(c)]) / k;
    }
  }
  return pred;
}

Prediction nearest_centroid_predict(const Eigen::MatrixXd& train_points,
                                    const std::vector<int>& train_labels,
                                    int num_classes,
                                    const Eigen::MatrixXd& test_points) {
  if (train_points.rows() == 0) {
    throw Error("nearest_centroid_predict: empty training set");
  }
  const Eigen::Index dim = train_points.cols();
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(num_classes, dim);
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (Eigen::Index t = 0; t < train_points.rows(); ++t) {
    const int c = train_labels[static_cast<std::size_t>(t)];
    centroids.row(c) += train_points.row(t);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      centroids.row(c) /= counts[static_cast<std::size_t>(c)];
    }
  }

  Prediction pred;
  pred.labels.resize(static_cast<std::size_t>(test_points.rows()));
  pred.scores = Eigen::MatrixXd::Zero(test_points.rows(), num_classes);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(num_classes));
  for (Eigen::Index q = 0; q < test_points.rows(); ++q) {
    double best_dist = inf;
    int best = -1;
    for (int c = 0; c < num_classes; ++c) {
      const double d = counts[static_cast<std::size_t>(c)] > 0
                           ? (centroids.row(c) - test_points.row(q)).norm()
                           : inf;
      dist[static_cast<std::size_t>(c)] = d;
      if (d < best_dist) {
        best_dist = d;
        best = c;
      }
    }
    if (best < 0) throw Error("nearest_centroid_predict: no trained class");
    pred.labels[static_cast<std::size_t>(q)] = best;
    double norm = 0.0;
    for (int c = 0; c < num_classes; ++c) {
      const double d = dist[static_cast<std::size_t>(c)];
      const double s = std::isinf(d) ? 0.0 : std::exp(-(d - best_dist));
      pred.scores(q, c) = s;
      norm += s;
    }
    pred.scores.row(q) /= norm;
  }
  return pred;
}

namespace {

// Row-stable softmax of logits, in place.
void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double shift = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - shift).exp();
    m.row(i) /= m.row(i).sum();
  }
}

}  // namespace

Prediction logistic_regression(const Eigen::MatrixXd& train_points,
                               const std::vector<int>& train_labels,
                               int num_classes,
                               const Eigen::MatrixXd& test_points,
                               const LogRegParams& params) {
  const Eigen::Index n = train_points.rows();
  if (n == 0) throw Error("logistic_regression: empty training set");
  if (!train_points.allFinite()) {
    throw Error("logistic_regression: non-finite features");
  }
  const Eigen::Index dim = train_points.cols();

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, num_classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    onehot(i, train_labels[static_cast<std::size_t>(i)]) = 1.0;
  }

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(dim, num_classes);
  Eigen::RowVectorXd intercept = Eigen::RowVectorXd::Zero(num_classes);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    Eigen::MatrixXd probs = train_points * weights;
    probs.rowwise() += intercept;
    softmax_rows(probs);

    double loss = 0.5 * params.l2 * weights.squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      loss -= std::log(std::max(
          probs(i, train_labels[static_cast<std::size_t>(i)]), 1e-300));
    }
    if (!std::isfinite(loss)) throw Diverged(params.lr);

    const Eigen::MatrixXd grad_base = (probs - onehot) / static_cast<double>(n);
    weights -= params.lr * (train_points.transpose() * grad_base +
                            params.l2 * weights);
    intercept -= params.lr * grad_base.colwise().sum();
  }

  Prediction pred;
  pred.scores = test_points * weights;
  pred.scores.rowwise() += intercept;
  softmax_rows(pred.scores);
  pred.labels.resize(static_cast<std::size_t>(test_points.rows()));
  for (Eigen::Index q = 0; q < test_points.rows(); ++q) {
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
      if (pred.scores(q, c) > pred.scores(q, best)) best = c;
    }
    pred.labels[static_cast<std::size_t>(q)] = best;
  }
  return pred;
}

double binary_roc_auc(const std::vector<int>& is_positive,
                      const Eigen::VectorXd& scores) {
  const std::size_t n = is_positive.size();
  std::uint64_t positives = 0;
  for (const int y : is_positive) positives += static_cast<std::uint64_t>(y != 0);
  const std::uint64_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) >
           scores(static_cast<Eigen::Index>(b));
  });

  // Trapezoid sweep over tied-score groups with integer accumulation, so the
  // extreme cases come out exact.
  std::uint64_t tp = 0, fp = 0, area2 = 0;
  std::size_t i = 0;
  while (i < n) {
    const double s = scores(static_cast<Eigen::Index>(order[i]));
    const std::uint64_t tp_prev = tp, fp_prev = fp;
    while (i < n && scores(static_cast<Eigen::Index>(order[i])) == s) {
      if (is_positive[order[i]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
  }
  return static_cast<double>(area2) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

MetricRecord compute_metrics(const std::vector<int>& y_true,
                             const std::vector<int>& y_pred,
                             const Eigen::MatrixXd& scores,
                             MetricDiagnostics* diag) {
  const std::size_t n = y_true.size();
  if (y_pred.size() != n || static_cast<std::size_t>(scores.rows()) != n) {
    throw Error("compute_metrics: length mismatch");
  }
  const int num_classes = static_cast<int>(scores.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (y_true[i] < 0 || y_true[i] >= num_classes) {
      throw Error("compute_metrics: unknown label in y_true");
    }
    if (y_pred[i] < 0 || y_pred[i] >= num_classes) {
      throw Error("compute_metrics: unknown label in y_pred");
    }
    const double row_sum = scores.row(static_cast<Eigen::Index>(i)).sum();
    if (std::abs(row_sum - 1.0) > 1e-6) {
      throw Error("compute_metrics: score row " + std::to_string(i) +
                  " sums to " + std::to_string(row_sum));
    }
  }

  std::vector<std::uint64_t> support(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::uint64_t> predicted(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::uint64_t> tp(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++support[static_cast<std::size_t>(y_true[i])];
    ++predicted[static_cast<std::size_t>(y_pred[i])];
    if (y_true[i] == y_pred[i]) ++tp[static_cast<std::size_t>(y_true[i])];
  }

  MetricDiagnostics local;
  MetricRecord rec;
  std::uint64_t correct = 0;
  for (const auto t : tp) correct += t;
  rec.accuracy = static_cast<double>(correct) / static_cast<double>(n);

  double macro_f1_sum = 0.0;
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    double precision = 0.0;
    if (predicted[cc] > 0) {
      precision = static_cast<double>(tp[cc]) / static_cast<double>(predicted[cc]);
    } else {
      ++local.zero_division_classes;
    }
    const double recall =
        support[cc] > 0
            ? static_cast<double>(tp[cc]) / static_cast<double>(support[cc])
            : 0.0;
    const double f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall)
                                 : 0.0;
    const double weight = static_cast<double>(support[cc]) / static_cast<double>(n);
    rec.precision_weighted += weight * precision;
    rec.recall_weighted += weight * recall;
    rec.f1_weighted += weight * f1;
    if (support[cc] > 0) {
      macro_f1_sum += f1;
      ++present;
    }
  }
  rec.f1_macro = present > 0 ? macro_f1_sum / present : 0.0;

  double auc_sum = 0.0;
  int auc_classes = 0;
  std::vector<int> is_positive(n);
  for (int c = 0; c < num_classes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    if (support[cc] == 0 || support[cc] == n) {
      ++local.auc_excluded_classes;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) is_positive[i] = y_true[i] == c ? 1 : 0;
    auc_sum += binary_roc_auc(is_positive, scores.col(c));
    ++auc_classes;
  }
  rec.roc_auc_ovr = auc_classes > 0 ? auc_sum / auc_classes : 0.5;

  if (diag != nullptr) *diag = local;
  return rec;
}

std::string classifier_name(const ClassifierSpec& spec) {
  switch (spec.kind) {
    case ClassifierKind::kKnn:
      return "knn";
    case ClassifierKind::kNearestCentroid:
      return "nearest_centroid";
    case ClassifierKind::kLogisticRegression:
      return "logistic_regression";
  }
  return "unknown";
}

namespace {

double metric_field(const MetricRecord& r, int field) {
  switch (field) {
    case 0: return r.accuracy;
    case 1: return r.precision_weighted;
    case 2: return r.recall_weighted;
    case 3: return r.f1_weighted;
    case 4: return r.f1_macro;
    case 5: return r.roc_auc_ovr;
    default: return r.train_time_seconds;
  }
}

void set_metric_field(MetricRecord& r, int field, double v) {
  switch (field) {
    case 0: r.accuracy = v; break;
    case 1: r.precision_weighted = v; break;
    case 2: r.recall_weighted = v; break;
    case 3: r.f1_weighted = v; break;
    case 4: r.f1_macro = v; break;
    case 5: r.roc_auc_ovr = v; break;
    default: r.train_time_seconds = v; break;
  }
}

}  // namespace

void finalize_report(EvalReport& report) {
  const auto runs = static_cast<double>(report.per_run.size());
  for (int f = 0; f < 7; ++f) {
    double mean = 0.0;
    for (const auto& r : report.per_run) mean += metric_field(r, f);
    mean /= runs;
    double var = 0.0;
    for (const auto& r : report.per_run) {
      const double d = metric_field(r, f) - mean;
      var += d * d;
    }
    var /= runs;  // population variance over the runs
    set_metric_field(report.mean, f, mean);
    set_metric_field(report.stddev, f, std::sqrt(var));
  }
}

EvalReport repeated_eval_on_embedding(const Eigen::MatrixXd& coords,
                                      const std::vector<int>& label_ids,
                                      const std::vector<std::string>& class_names,
                                      const ClassifierSpec& spec,
                                      const std::vector<std::uint64_t>& seeds,
                                      double train_frac) {
  if (seeds.empty()) throw Error("repeated_eval: needs at least one run");
  const int num_classes = static_cast<int>(class_names.size());

  EvalReport report;
  report.classifier = classifier_name(spec);
  report.seeds = seeds;

  for (const std::uint64_t seed : seeds) {
    const SplitPlan plan =
        stratified_split(label_ids, class_names, train_frac, seed);

    const auto take = [&](const std::vector<std::size_t>& idx,
                          Eigen::MatrixXd& points, std::vector<int>& labels) {
      points.resize(static_cast<Eigen::Index>(idx.size()), coords.cols());
      labels.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        points.row(static_cast<Eigen::Index>(i)) =
            coords.row(static_cast<Eigen::Index>(idx[i]));
        labels[i] = label_ids[idx[i]];
      }
    };
    Eigen::MatrixXd train_points, test_points;
    std::vector<int> train_labels, test_labels;
    take(plan.train_indices, train_points, train_labels);
    take(plan.test_indices, test_points, test_labels);

    const auto start = std::chrono::steady_clock::now();
    Prediction pred;
    switch (spec.kind) {
      case ClassifierKind::kKnn:
        pred = knn_predict(train_points, train_labels, num_classes, test_points,
                           spec.knn_k);
        break;
      case ClassifierKind::kNearestCentroid:
        pred = nearest_centroid_predict(train_points, train_labels, num_classes,
                                        test_points);
        break;
      case ClassifierKind::kLogisticRegression:
        pred = logistic_regression(train_points, train_labels, num_classes,
                                   test_points, spec.logreg);
        break;
    }
    const auto stop = std::chrono::steady_clock::now();

    MetricRecord rec = compute_metrics(test_labels, pred.labels, pred.scores);
    rec.train_time_seconds =
        std::chrono::duration<double>(stop - start).count();
    report.per_run.push_back(rec);
  }
  finalize_report(report);
  return report;
}

EvalReport repeated_eval(const LabeledDataset& ds, const ClassifierSpec& spec,
                         int runs, std::uint64_t base_seed,
                         const EvalOptions& options) {
  if (runs < 1) throw Error("repeated_eval: runs must be >= 1");
  if (ds.num_classes() < 2) {
    throw Error("repeated_eval: classification needs at least 2 classes");
  }
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    seeds[static_cast<std::size_t>(r)] = base_seed + static_cast<std::uint64_t>(r);
  }

  const KernelMatrix K = kernel_matrix(ds, options.threads);
  const Eigen::Index d =
      std::min<Eigen::Index>(options.kpca_components, K.size());
  const EmbeddingMatrix embedding = kpca_embed(K, d, options.clip_negative);
  if (embedding.d() == 0) {
    throw Error("repeated_eval: embedding has no positive components");
  }
  return repeated_eval_on_embedding(embedding.coords, ds.label_ids(),
                                    ds.class_names, spec, seeds,
                                    options.train_frac);
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void metric_row(std::string& out, const MetricRecord& r) {
  for (int f = 0; f < 7; ++f) {
    out += ',';
    out += fmt_double(metric_field(r, f));
  }
  out += '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "classifier,run,seed,accuracy,prec_w,recall_w,f1_w,f1_macro,roc_auc,"
         "train_time\n";
  std::string line;
  for (const auto& report : reports) {
    for (std::size_t r = 0; r < report.per_run.size(); ++r) {
      line = report.classifier + "," + std::to_string(r) + "," +
             std::to_string(report.seeds[r]);
      metric_row(line, report.per_run[r]);
      out << line;
    }
    line = report.classifier + ",mean,";
    metric_row(line, report.mean);
    out << line;
    line = report.classifier + ",std,";
    metric_row(line, report.stddev);
    out << line;
  }
}

std::string report_table(const std::vector<EvalReport>& reports) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-20s %-5s %9s %9s %9s %9s %9s %9s %11s\n",
                "classifier", "run", "acc", "prec_w", "recall_w", "f1_w",
                "f1_macro", "roc_auc", "time_s");
  out += buf;
  const auto row = [&](const std::string& name, const std::string& run,
                       const MetricRecord& r) {
    std::snprintf(buf, sizeof buf,
                  "%-20s %-5s %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %11.4f\n",
                  name.c_str(), run.c_str(), r.accuracy, r.precision_weighted,
                  r.recall_weighted, r.f1_weighted, r.f1_macro, r.roc_auc_ovr,
                  r.train_time_seconds);
    out += buf;
  };
  for (const auto& report : reports) {
    for (std::size_t r = 0; r < report.per_run.size(); ++r) {
      row(report.classifier, std::to_string(r), report.per_run[r]);
    }
    row(report.classifier, "mean", report.mean);
    row(report.classifier, "std", report.stddev);
  }
  return out;
}

}  // namespace psskm
