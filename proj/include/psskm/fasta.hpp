#ifndef PSSKM_FASTA_HPP
#define PSSKM_FASTA_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "psskm/errors.hpp"
#include "psskm/sequence.hpp"

namespace psskm {

struct EmptyInput : Error {
  EmptyInput();
};

struct EmptyRecord : Error {
  explicit EmptyRecord(std::size_t record_index);
  std::size_t record_index;
};

struct DuplicateId : Error {
  DuplicateId(const std::string& id, std::size_t record_index);
};

// Reads '>'-headed records. The id is the header up to the first whitespace;
// body lines may be wrapped and are uppercased on ingest.
std::vector<Sequence> parse_fasta(std::istream& in);
std::vector<Sequence> parse_fasta(std::string_view text);
std::vector<Sequence> load_fasta_file(const std::string& path);

// wrap == 0 writes each body on a single line.
void write_fasta(std::ostream& out, const std::vector<Sequence>& seqs,
                 std::size_t wrap = 0);

// One id<TAB>label row per line; '#' comments and blank lines are skipped.
std::map<std::string, std::string> read_label_tsv(std::istream& in);
std::map<std::string, std::string> load_label_tsv_file(const std::string& path);

}  // namespace psskm

#endif  // PSSKM_FASTA_HPP
