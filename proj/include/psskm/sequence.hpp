#ifndef PSSKM_SEQUENCE_HPP
#define PSSKM_SEQUENCE_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "psskm/alphabet.hpp"
#include "psskm/errors.hpp"

namespace psskm {

struct Sequence {
  std::string id;
  std::string residues;  // uppercase; pads, if any, form a contiguous suffix
};

// Residue count excluding the pad suffix.
std::size_t non_pad_length(std::string_view residues);

// Position of the first character that is neither a residue nor part of a
// trailing pad run, or npos when the string is clean.
std::size_t find_invalid_residue(std::string_view residues);

struct InvalidResidue : Error {
  InvalidResidue(const std::string& id, std::size_t pos, char c);
  std::string sequence_id;
  std::size_t position;
  char character;
};

struct MissingLabel : Error {
  explicit MissingLabel(const std::string& id);
};

struct LabeledDataset {
  std::vector<Sequence> sequences;
  std::vector<std::string> labels;         // aligned with sequences
  std::map<std::string, int> class_index;  // label -> 0..C-1, first-appearance order
  std::vector<std::string> class_names;    // inverse of class_index

  std::size_t size() const { return sequences.size(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::vector<int> label_ids() const;  // per-sequence class id
};

// Pairs sequences with labels from an id -> label table. Class ids are
// assigned in first appearance order over the sequence list. Table entries
// that match no sequence are counted into *unused_labels when provided.
LabeledDataset attach_labels(std::vector<Sequence> seqs,
                             const std::map<std::string, std::string>& label_table,
                             std::size_t* unused_labels = nullptr);

// Right-pads every sequence with kPadSymbol up to the dataset maximum
// length. Idempotent. Throws InvalidResidue on the first offending
// character (including a pad symbol that is not part of a trailing run).
LabeledDataset pad_to_common_length(LabeledDataset ds);

}  // namespace psskm

#endif  // PSSKM_SEQUENCE_HPP
