// Command-line pipeline around the psskm library: kernel matrix export,
// kernel-PCA embeddings, repeated classification runs, and spectrum/kernel
// distance comparisons.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "psskm/baselines.hpp"
#include "psskm/eval.hpp"
#include "psskm/fasta.hpp"
#include "psskm/kernel.hpp"
#include "psskm/rng.hpp"
#include "psskm/spectral.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string input_fasta;
  std::string labels_tsv;
  std::string output_dir = ".";
  int kmer_k = 3;
  int spaced_g = 9;
  int kpca_components = 50;
  bool clip_negative = true;
  int knn_k = 5;
  double train_frac = 0.7;
  int runs = 5;
  std::uint64_t base_seed = 42;
  int threads = 0;  // 0 = all cores
  std::string on_invalid = "error";
  bool spaced_all_substrings = false;
  std::string dump_pssm_id;
  bool dump_spectra = false;
};

// Every option lives on the main app so a flat key=value --config file can
// address all of them; subcommands fall through to the app for matching.
void add_options(CLI::App& app, RunConfig* cfg) {
  app.add_option("--fasta", cfg->input_fasta, "Input FASTA file")->required();
  app.add_option("--labels", cfg->labels_tsv, "Label TSV (id<TAB>label)")
      ->required();
  app.add_option("--output-dir", cfg->output_dir, "Directory for artifacts");
  app.add_option("--threads", cfg->threads,
                 "Worker threads for the kernel matrix (0 = all cores)")
      ->envname("PSSKM_THREADS");
  app.add_option("--seed", cfg->base_seed, "Base seed; run r uses seed + r");
  app.add_option("--on-invalid", cfg->on_invalid,
                 "What to do with non-residue characters")
      ->check(CLI::IsMember({"error", "drop"}));
  app.add_option("--components", cfg->kpca_components,
                 "Kernel-PCA components to request");
  app.add_option("--clip-negative", cfg->clip_negative,
                 "Drop non-positive eigenvalues instead of failing");
  app.add_option("--knn-k", cfg->knn_k, "Neighbors for KNN");
  app.add_option("--train-frac", cfg->train_frac,
                 "Training fraction per class");
  app.add_option("--runs", cfg->runs, "Number of repeated runs");
  app.add_option("--kmer-k", cfg->kmer_k, "k-mer length");
  app.add_option("--spaced-g", cfg->spaced_g, "Spaced k-mer window");
  app.add_flag("--spaced-all-substrings", cfg->spaced_all_substrings,
               "Count every k-substring per window, not the prefix");
  app.add_option("--dump-pssm", cfg->dump_pssm_id,
                 "Also write pssm_<id>.csv for this sequence (kernel)");
  app.add_flag("--dump-spectra", cfg->dump_spectra,
               "Also write spectra/<id>.csv per sequence (compare)");
  app.set_config("--config", "",
                 "Flat key=value file; command-line flags take precedence");
}

// Range checks that CLI11 flags alone do not cover.
void validate(const RunConfig& cfg, bool needs_spectrum) {
  if (cfg.kpca_components < 1) {
    throw CLI::ValidationError("--components must be >= 1");
  }
  if (cfg.knn_k < 1) throw CLI::ValidationError("--knn-k must be >= 1");
  if (!(cfg.train_frac > 0.0 && cfg.train_frac < 1.0)) {
    throw CLI::ValidationError("--train-frac must be in (0, 1)");
  }
  if (cfg.runs < 1) throw CLI::ValidationError("--runs must be >= 1");
  if (needs_spectrum) {
    if (cfg.kmer_k < 1 || cfg.kmer_k > 6) {
      throw CLI::ValidationError("--kmer-k must be in 1..6");
    }
    if (cfg.kmer_k >= cfg.spaced_g) {
      throw CLI::ValidationError("--spaced-g must exceed --kmer-k");
    }
  }
}

psskm::LabeledDataset load_dataset(const RunConfig& cfg) {
  auto seqs = psskm::load_fasta_file(cfg.input_fasta);
  if (cfg.on_invalid == "drop") {
    std::vector<psskm::Sequence> kept;
    kept.reserve(seqs.size());
    std::size_t dropped = 0;
    for (auto& seq : seqs) {
      if (psskm::find_invalid_residue(seq.residues) == std::string_view::npos) {
        kept.push_back(std::move(seq));
      } else {
        ++dropped;
      }
    }
    if (dropped > 0) {
      std::cerr << "warning: dropped " << dropped
                << " sequence(s) with invalid residues\n";
    }
    if (kept.empty()) throw psskm::Error("all sequences were dropped");
    seqs = std::move(kept);
  }

  const auto table = psskm::load_label_tsv_file(cfg.labels_tsv);
  std::size_t unused = 0;
  auto ds = psskm::attach_labels(std::move(seqs), table, &unused);
  if (unused > 0) {
    std::cerr << "warning: " << unused << " label row(s) matched no sequence\n";
  }
  return psskm::pad_to_common_length(std::move(ds));
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name);
  if (!out) throw psskm::Error("cannot write " + (dir / name).string());
  return out;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw psskm::Error("cannot create output dir: " + dir.string());
  return dir;
}

psskm::EmbeddingMatrix embed_dataset(const psskm::KernelMatrix& K,
                                     const RunConfig& cfg) {
  const auto n = K.size();
  Eigen::Index d = cfg.kpca_components;
  if (d > n) {
    std::cerr << "warning: reducing requested components from " << d << " to "
              << n << " (dataset size)\n";
    d = n;
  }
  auto embedding = psskm::kpca_embed(K, d, cfg.clip_negative);
  if (embedding.clipped_components > 0) {
    std::cerr << "warning: retained " << embedding.d() << " of " << d
              << " components (" << embedding.clipped_components
              << " clipped at the positive-spectrum floor)\n";
  }
  if (embedding.d() == 0) {
    throw psskm::Error("no positive kernel-PCA components; cannot embed");
  }
  return embedding;
}

int cmd_kernel(const RunConfig& cfg) {
  const auto dir = prepare_output_dir(cfg);
  const auto ds = load_dataset(cfg);
  if (!cfg.dump_pssm_id.empty()) {
    bool found = false;
    for (const auto& seq : ds.sequences) {
      if (seq.id != cfg.dump_pssm_id) continue;
      auto out = open_output(dir, "pssm_" + seq.id + ".csv");
      psskm::write_pssm_csv(out, psskm::compute_pssm(seq));
      found = true;
      break;
    }
    if (!found) {
      throw psskm::Error("--dump-pssm: no sequence with id '" +
                         cfg.dump_pssm_id + "'");
    }
  }
  const auto K = psskm::kernel_matrix(ds, cfg.threads);
  {
    auto out = open_output(dir, "kernel.csv");
    psskm::write_kernel_csv(out, K);
  }
  const auto report = psskm::eigen_spectrum(K);
  open_output(dir, "spectrum_report.txt") << psskm::spectral_report_text(report);
  open_output(dir, "spectrum_report.csv") << psskm::spectral_report_csv(report);
  std::cout << "kernel: " << K.size() << "x" << K.size() << " matrix, "
            << (report.psd_within_tol ? "PSD" : "not PSD") << " within tol "
            << report.tol << "\n";
  return 0;
}

int cmd_embed(const RunConfig& cfg) {
  const auto dir = prepare_output_dir(cfg);
  const auto ds = load_dataset(cfg);
  const auto K = psskm::kernel_matrix(ds, cfg.threads);
  const auto embedding = embed_dataset(K, cfg);
  {
    auto out = open_output(dir, "embeddings.csv");
    psskm::write_embeddings_csv(out, embedding);
  }
  {
    auto out = open_output(dir, "eigenvalues.csv");
    psskm::write_eigenvalues_csv(out, embedding);
  }
  std::cout << "embed: " << embedding.n() << " sequences x " << embedding.d()
            << " components\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
  const auto dir = prepare_output_dir(cfg);
  const auto ds = load_dataset(cfg);
  if (ds.num_classes() < 2) {
    throw psskm::Error("evaluate needs at least 2 classes");
  }
  const auto K = psskm::kernel_matrix(ds, cfg.threads);
  const auto embedding = embed_dataset(K, cfg);

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.runs));
  for (int r = 0; r < cfg.runs; ++r) {
    seeds[static_cast<std::size_t>(r)] =
        cfg.base_seed + static_cast<std::uint64_t>(r);
  }
  const auto label_ids = ds.label_ids();

  std::vector<psskm::ClassifierSpec> specs{
      {psskm::ClassifierKind::kKnn, cfg.knn_k, {}},
      {psskm::ClassifierKind::kNearestCentroid, cfg.knn_k, {}},
      {psskm::ClassifierKind::kLogisticRegression, cfg.knn_k, {}},
  };
  std::vector<psskm::EvalReport> reports;
  reports.reserve(specs.size());
  for (const auto& spec : specs) {
    reports.push_back(psskm::repeated_eval_on_embedding(
        embedding.coords, label_ids, ds.class_names, spec, seeds,
        cfg.train_frac));
  }

  {
    auto out = open_output(dir, "report.csv");
    psskm::write_report_csv(out, reports);
  }
  std::cout << psskm::report_table(reports);
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  const auto dir = prepare_output_dir(cfg);
  const auto ds = load_dataset(cfg);
  const auto n = ds.size();
  const auto K = psskm::kernel_matrix(ds, cfg.threads);
  const auto label_ids = ds.label_ids();

  std::vector<psskm::SpectrumVector> spectra, spaced;
  spectra.reserve(n);
  spaced.reserve(n);
  for (const auto& seq : ds.sequences) {
    spectra.push_back(psskm::kmer_spectrum(seq.residues, cfg.kmer_k));
    spaced.push_back(psskm::spaced_kmer_spectrum(
        seq.residues, cfg.kmer_k, cfg.spaced_g, cfg.spaced_all_substrings));
  }
  const double gamma = psskm::default_gamma(cfg.kmer_k);

  if (cfg.dump_spectra) {
    const fs::path spectra_dir = dir / "spectra";
    std::error_code ec;
    fs::create_directories(spectra_dir, ec);
    if (ec) throw psskm::Error("cannot create " + spectra_dir.string());
    for (std::size_t i = 0; i < n; ++i) {
      auto out = open_output(spectra_dir, ds.sequences[i].id + ".csv");
      psskm::write_spectrum_csv(out, spectra[i]);
    }
  }

  // All pairs for small datasets, otherwise a seeded sample.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t max_pairs = 5000;
  if (n * (n - 1) / 2 <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
  } else {
    psskm::Rng rng(cfg.base_seed);
    while (pairs.size() < max_pairs) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      const auto j = static_cast<std::size_t>(rng.below(n));
      if (i < j) pairs.emplace_back(i, j);
    }
  }

  double within_sum = 0.0, across_sum = 0.0;
  std::size_t within_count = 0, across_count = 0;
  {
    auto out = open_output(dir, "distances.csv");
    out << "id_i,id_j,same_class,gaussian_kmer,gaussian_spaced,wpsskm\n";
    char buf[64];
    for (const auto& [i, j] : pairs) {
      const bool same = label_ids[i] == label_ids[j];
      const double g_kmer =
          psskm::gaussian_spectrum_distance(spectra[i], spectra[j], gamma);
      const double g_spaced =
          psskm::gaussian_spectrum_distance(spaced[i], spaced[j], gamma);
      const double kd = psskm::kernel_distance(
          K, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out << ds.sequences[i].id << ',' << ds.sequences[j].id << ','
          << (same ? 1 : 0);
      std::snprintf(buf, sizeof buf, ",%.17g", g_kmer);
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", g_spaced);
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", kd);
      out << buf << '\n';
      (same ? within_sum : across_sum) += kd;
      ++(same ? within_count : across_count);
    }
  }

  const auto embedding = embed_dataset(K, cfg);
  const auto heatmap =
      psskm::class_similarity_heatmap(embedding, label_ids, ds.class_names);
  if (heatmap.excluded_rows > 0) {
    std::cerr << "warning: " << heatmap.excluded_rows
              << " zero-norm embedding row(s) excluded from the heatmap\n";
  }
  {
    auto out = open_output(dir, "heatmap.csv");
    psskm::write_heatmap_csv(out, heatmap);
  }

  if (within_count > 0) {
    std::cout << "mean within-class kernel distance: "
              << within_sum / static_cast<double>(within_count) << " ("
              << within_count << " pairs)\n";
  }
  if (across_count > 0) {
    std::cout << "mean across-class kernel distance: "
              << across_sum / static_cast<double>(across_count) << " ("
              << across_count << " pairs)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted position-specific scoring kernel pipeline"};
  app.require_subcommand(1);

  RunConfig cfg;
  add_options(app, &cfg);

  auto* kernel_cmd =
      app.add_subcommand("kernel", "Kernel matrix CSV plus spectral report");
  auto* embed_cmd =
      app.add_subcommand("embed", "Kernel-PCA embeddings and eigenvalues");
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Repeated stratified classification runs with metrics");
  auto* compare_cmd = app.add_subcommand(
      "compare", "Spectrum vs kernel distances and class heatmap");
  for (auto* cmd : {kernel_cmd, embed_cmd, evaluate_cmd, compare_cmd}) {
    cmd->fallthrough();
  }

  try {
    app.parse(argc, argv);
    validate(cfg, compare_cmd->parsed());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (kernel_cmd->parsed()) return cmd_kernel(cfg);
    if (embed_cmd->parsed()) return cmd_embed(cfg);
    if (evaluate_cmd->parsed()) return cmd_evaluate(cfg);
    if (compare_cmd->parsed()) return cmd_compare(cfg);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const psskm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
