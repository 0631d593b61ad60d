#ifndef PSSKM_ALPHABET_HPP
#define PSSKM_ALPHABET_HPP

#include <array>
#include <string_view>

#include "psskm/errors.hpp"

namespace psskm {

// Fixed residue ordering. Every 20-wide matrix column in the library refers
// to a position in this string.
inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kAlphabetSize = 20;

// Right-padding character used for length normalization. Never a residue.
inline constexpr char kPadSymbol = '-';

struct NotAnAminoAcid : Error {
  explicit NotAnAminoAcid(char c);
  char character;
};

namespace detail {
constexpr std::array<signed char, 256> make_aa_table() {
  std::array<signed char, 256> table{};
  for (auto& entry : table) entry = -1;
  for (int i = 0; i < kAlphabetSize; ++i) {
    table[static_cast<unsigned char>(kAminoAcids[i])] = static_cast<signed char>(i);
  }
  return table;
}
inline constexpr auto kAaTable = make_aa_table();
}  // namespace detail

// Column index of c, or -1 when c is not one of the 20 residues.
constexpr int aa_index_or_neg(char c) {
  return detail::kAaTable[static_cast<unsigned char>(c)];
}

constexpr bool is_amino_acid(char c) { return aa_index_or_neg(c) >= 0; }

namespace detail {
constexpr bool symbols_unique() {
  for (std::size_t i = 0; i < kAminoAcids.size(); ++i) {
    for (std::size_t j = i + 1; j < kAminoAcids.size(); ++j) {
      if (kAminoAcids[i] == kAminoAcids[j]) return false;
    }
  }
  return true;
}
}  // namespace detail

static_assert(kAminoAcids.size() == kAlphabetSize);
static_assert(detail::symbols_unique());
static_assert(!is_amino_acid(kPadSymbol));

// Column index of c in kAminoAcids. Throws NotAnAminoAcid for the pad
// symbol and any other character.
int aa_index(char c);

}  // namespace psskm

#endif  // PSSKM_ALPHABET_HPP
