#include "psskm/sequence.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace psskm {

std::size_t non_pad_length(std::string_view residues) {
  std::size_t len = residues.size();
  while (len > 0 && residues[len - 1] == kPadSymbol) --len;
  return len;
}

std::size_t find_invalid_residue(std::string_view residues) {
  const std::size_t real_len = non_pad_length(residues);
  for (std::size_t i = 0; i < real_len; ++i) {
    if (!is_amino_acid(residues[i])) return i;
  }
  return std::string_view::npos;
}

InvalidResidue::InvalidResidue(const std::string& id, std::size_t pos, char c)
    : Error("invalid residue '" + std::string(1, c) + "' in sequence '" + id +
            "' at position " + std::to_string(pos)),
      sequence_id(id),
      position(pos),
      character(c) {}

MissingLabel::MissingLabel(const std::string& id)
    : Error("no label for sequence '" + id + "'") {}

std::vector<int> LabeledDataset::label_ids() const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& label : labels) ids.push_back(class_index.at(label));
  return ids;
}

LabeledDataset attach_labels(std::vector<Sequence> seqs,
                             const std::map<std::string, std::string>& label_table,
                             std::size_t* unused_labels) {
  LabeledDataset ds;
  ds.sequences = std::move(seqs);
  ds.labels.reserve(ds.sequences.size());

  std::set<std::string> used_ids;
  for (const auto& seq : ds.sequences) {
    const auto it = label_table.find(seq.id);
    if (it == label_table.end()) throw MissingLabel(seq.id);
    used_ids.insert(seq.id);
    const std::string& label = it->second;
    if (ds.class_index.find(label) == ds.class_index.end()) {
      ds.class_index.emplace(label, static_cast<int>(ds.class_names.size()));
      ds.class_names.push_back(label);
    }
    ds.labels.push_back(label);
  }
  if (unused_labels != nullptr) {
    *unused_labels = label_table.size() - used_ids.size();
  }
  return ds;
}

LabeledDataset pad_to_common_length(LabeledDataset ds) {
  std::size_t max_len = 0;
  for (const auto& seq : ds.sequences) {
    const std::size_t bad = find_invalid_residue(seq.residues);
    if (bad != std::string_view::npos) {
      throw InvalidResidue(seq.id, bad, seq.residues[bad]);
    }
    max_len = std::max(max_len, seq.residues.size());
  }
  for (auto& seq : ds.sequences) {
    seq.residues.append(max_len - seq.residues.size(), kPadSymbol);
  }
  return ds;
}

}  // namespace psskm
