#include "psskm/alphabet.hpp"

#include <string>

namespace psskm {

namespace {
std::string describe(char c) {
  std::string msg = "not an amino acid: '";
  msg += c;
  msg += "'";
  return msg;
}
}  // namespace

NotAnAminoAcid::NotAnAminoAcid(char c) : Error(describe(c)), character(c) {}

int aa_index(char c) {
  const int idx = aa_index_or_neg(c);
  if (idx < 0) throw NotAnAminoAcid(c);
  return idx;
}

}  // namespace psskm
