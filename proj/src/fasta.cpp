#include "psskm/fasta.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace psskm {

EmptyInput::EmptyInput() : Error("EmptyInput: no sequence records") {}

EmptyRecord::EmptyRecord(std::size_t idx)
    : Error("EmptyRecord: record " + std::to_string(idx) + " has no residues"),
      record_index(idx) {}

DuplicateId::DuplicateId(const std::string& id, std::size_t idx)
    : Error("DuplicateId: '" + id + "' reappears at record " + std::to_string(idx)) {}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  for (const char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string header_id(const std::string& header_line) {
  std::string id;
  for (std::size_t i = 1; i < header_line.size(); ++i) {
    if (std::isspace(static_cast<unsigned char>(header_line[i]))) break;
    id += header_line[i];
  }
  return id;
}

}  // namespace

std::vector<Sequence> parse_fasta(std::istream& in) {
  std::vector<Sequence> seqs;
  std::set<std::string> seen_ids;
  bool in_record = false;

  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (is_blank(line)) continue;
    if (line[0] == '>') {
      if (in_record && seqs.back().residues.empty()) {
        throw EmptyRecord(seqs.size() - 1);
      }
      const std::string id = header_id(line);
      if (id.empty()) {
        throw MalformedInput("record " + std::to_string(seqs.size()) +
                             " has an empty id");
      }
      if (!seen_ids.insert(id).second) throw DuplicateId(id, seqs.size());
      seqs.push_back(Sequence{id, ""});
      in_record = true;
    } else {
      if (!in_record) {
        throw MalformedInput("sequence data before the first '>' header");
      }
      for (const char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        seqs.back().residues +=
            static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
    }
  }
  if (seqs.empty()) throw EmptyInput();
  if (seqs.back().residues.empty()) throw EmptyRecord(seqs.size() - 1);
  return seqs;
}

std::vector<Sequence> parse_fasta(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fasta(in);
}

std::vector<Sequence> load_fasta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open FASTA file: " + path);
  return parse_fasta(in);
}

void write_fasta(std::ostream& out, const std::vector<Sequence>& seqs,
                 std::size_t wrap) {
  for (const auto& seq : seqs) {
    out << '>' << seq.id << '\n';
    if (wrap == 0) {
      out << seq.residues << '\n';
    } else {
      for (std::size_t i = 0; i < seq.residues.size(); i += wrap) {
        out << seq.residues.substr(i, wrap) << '\n';
      }
    }
  }
}

std::map<std::string, std::string> read_label_tsv(std::istream& in) {
  std::map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line) || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw MalformedInput("label line " + std::to_string(line_no) +
                           " is not id<TAB>label");
    }
    std::string id = line.substr(0, tab);
    std::string label = line.substr(tab + 1);
    while (!label.empty() &&
           std::isspace(static_cast<unsigned char>(label.back()))) {
      label.pop_back();
    }
    if (label.empty()) {
      throw MalformedInput("label line " + std::to_string(line_no) +
                           " has an empty label");
    }
    if (!table.emplace(std::move(id), std::move(label)).second) {
      throw DuplicateId(line.substr(0, tab), line_no);
    }
  }
  return table;
}

std::map<std::string, std::string> load_label_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  return read_label_tsv(in);
}

}  // namespace psskm
