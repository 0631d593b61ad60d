#ifndef PSSKM_TESTS_FIXTURES_HPP
#define PSSKM_TESTS_FIXTURES_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psskm/alphabet.hpp"
#include "psskm/rng.hpp"
#include "psskm/sequence.hpp"

namespace fixtures {

inline std::string random_residues(psskm::Rng& rng, std::size_t len,
                                   int alphabet_size = psskm::kAlphabetSize) {
  std::string s(len, 'A');
  for (auto& c : s) {
    c = psskm::kAminoAcids[static_cast<std::size_t>(
        rng.below(static_cast<std::uint64_t>(alphabet_size)))];
  }
  return s;
}

// Dataset from raw residue strings; ids r0..r{n-1}, labels round-robin over
// the given class names.
inline psskm::LabeledDataset make_dataset(
    const std::vector<std::string>& residues,
    const std::vector<std::string>& class_names = {"a", "b"}) {
  psskm::LabeledDataset ds;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    ds.sequences.push_back({"r" + std::to_string(i), residues[i]});
    ds.labels.push_back(class_names[i % class_names.size()]);
  }
  for (const auto& label : ds.labels) {
    if (ds.class_index.find(label) == ds.class_index.end()) {
      ds.class_index.emplace(label, static_cast<int>(ds.class_names.size()));
      ds.class_names.push_back(label);
    }
  }
  return ds;
}

// Random equal-length dataset, already kernel-ready.
inline psskm::LabeledDataset random_dataset(psskm::Rng& rng, std::size_t n,
                                            std::size_t len,
                                            int alphabet_size = psskm::kAlphabetSize) {
  std::vector<std::string> residues;
  residues.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    residues.push_back(random_residues(rng, len, alphabet_size));
  }
  return make_dataset(residues);
}

// Random residues with an optional random pad suffix appended after `len`
// real characters; total length is len + pads.
inline std::string random_residues_padded(psskm::Rng& rng, std::size_t len,
                                          std::size_t pads) {
  std::string s = random_residues(rng, len);
  s.append(pads, psskm::kPadSymbol);
  return s;
}

// Independent character-count oracle used against PSSM column sums and the
// kernel diagonal identity.
inline std::array<int, psskm::kAlphabetSize> count_residues(std::string_view s) {
  std::array<int, psskm::kAlphabetSize> counts{};
  for (const char c : s) {
    const int idx = psskm::aa_index_or_neg(c);
    if (idx >= 0) ++counts[static_cast<std::size_t>(idx)];
  }
  return counts;
}

// Three classes over a shared random background of the given length. Each
// class fixes its own residues at its own block of conserved positions,
// then every position is independently renoised with the given rate.
inline psskm::LabeledDataset motif_dataset(std::uint64_t seed,
                                           std::size_t per_class = 100,
                                           std::size_t len = 60,
                                           std::size_t conserved = 12,
                                           double noise = 0.10) {
  psskm::Rng rng(seed);
  const int num_classes = 3;
  conserved = std::min(conserved, len / num_classes);

  const std::string background = random_residues(rng, len);
  std::vector<std::size_t> positions(len);
  for (std::size_t i = 0; i < len; ++i) positions[i] = i;
  rng.shuffle(positions);

  std::vector<std::vector<std::size_t>> class_positions(num_classes);
  std::vector<std::string> class_motifs(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t k = 0; k < conserved; ++k) {
      class_positions[static_cast<std::size_t>(c)].push_back(
          positions[static_cast<std::size_t>(c) * conserved + k]);
    }
    class_motifs[static_cast<std::size_t>(c)] = random_residues(rng, conserved);
  }

  std::vector<std::string> residues;
  std::vector<std::string> labels;
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t m = 0; m < per_class; ++m) {
      std::string s = background;
      for (std::size_t k = 0; k < conserved; ++k) {
        s[class_positions[static_cast<std::size_t>(c)][k]] =
            class_motifs[static_cast<std::size_t>(c)][k];
      }
      for (auto& ch : s) {
        if (rng.uniform() < noise) {
          ch = psskm::kAminoAcids[static_cast<std::size_t>(rng.below(20))];
        }
      }
      residues.push_back(std::move(s));
      labels.push_back("class_" + std::to_string(c));
    }
  }

  psskm::LabeledDataset ds;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    ds.sequences.push_back({"seq" + std::to_string(i), residues[i]});
    ds.labels.push_back(labels[i]);
  }
  for (const auto& label : ds.labels) {
    if (ds.class_index.find(label) == ds.class_index.end()) {
      ds.class_index.emplace(label, static_cast<int>(ds.class_names.size()));
      ds.class_names.push_back(label);
    }
  }
  return ds;
}

// Two classes with identical residue composition: class B's template is a
// position-shuffled copy of class A's, and members differ from their
// template only by composition-preserving position swaps.
inline psskm::LabeledDataset permuted_composition_dataset(
    std::uint64_t seed, std::size_t per_class = 20, std::size_t len = 60,
    std::size_t member_swaps = 3) {
  psskm::Rng rng(seed);

  const std::string base = random_residues(rng, len);
  std::string shuffled = base;
  std::size_t mismatches = 0;
  do {
    std::vector<char> chars(shuffled.begin(), shuffled.end());
    rng.shuffle(chars);
    shuffled.assign(chars.begin(), chars.end());
    mismatches = 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (shuffled[i] != base[i]) ++mismatches;
    }
  } while (mismatches < len / 2);

  const auto perturb = [&](const std::string& tmpl) {
    std::string s = tmpl;
    for (std::size_t k = 0; k < member_swaps; ++k) {
      const auto i = static_cast<std::size_t>(rng.below(len));
      const auto j = static_cast<std::size_t>(rng.below(len));
      std::swap(s[i], s[j]);
    }
    return s;
  };

  psskm::LabeledDataset ds;
  std::size_t next_id = 0;
  for (const auto& [tmpl, label] :
       std::vector<std::pair<std::string, std::string>>{{base, "alpha"},
                                                        {shuffled, "beta"}}) {
    for (std::size_t m = 0; m < per_class; ++m) {
      ds.sequences.push_back({"seq" + std::to_string(next_id++), perturb(tmpl)});
      ds.labels.push_back(label);
    }
  }
  for (const auto& label : ds.labels) {
    if (ds.class_index.find(label) == ds.class_index.end()) {
      ds.class_index.emplace(label, static_cast<int>(ds.class_names.size()));
      ds.class_names.push_back(label);
    }
  }
  return ds;
}

}  // namespace fixtures

#endif  // PSSKM_TESTS_FIXTURES_HPP
