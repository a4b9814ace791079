#pragma once

// Loading the shipped prelude. The file is split into sections by marker lines
//
//   -- SECTION <name> [requires: ax1,ax2]
//
// and a section is checked only when every axiom it requires is enabled.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hott/axioms.hpp"
#include "hott/module.hpp"

#ifndef HOTT_PRELUDE_PATH
#define HOTT_PRELUDE_PATH "prelude/prelude.htt"
#endif

namespace hott {

struct Section {
  std::string name;  // empty for text before the first marker
  std::vector<std::string> requires_axioms;
  std::size_t offset = 0;  // of the section body within the file
  std::string_view text;
};

class UnknownLemma : public std::runtime_error {
 public:
  explicit UnknownLemma(const std::string& name) : std::runtime_error("UnknownLemma(" + name + ")") {}
};

class SourceUnreadable : public std::runtime_error {
 public:
  explicit SourceUnreadable(const std::string& path) : std::runtime_error("cannot read " + path) {}
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SourceUnreadable(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw SourceUnreadable(path);
  return ss.str();
}

inline std::string default_prelude_path() { return HOTT_PRELUDE_PATH; }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

// Parses "-- SECTION name [requires: a,b]"; false if the line is not a marker.
inline bool parse_marker(std::string_view line, Section& out) {
  constexpr std::string_view tag = "-- SECTION ";
  line = trim(line);
  if (line.substr(0, tag.size()) != tag) return false;
  line = trim(line.substr(tag.size()));
  std::size_t bracket = line.find('[');
  out.name = std::string(trim(line.substr(0, bracket)));
  out.requires_axioms.clear();
  if (bracket != std::string_view::npos) {
    std::string_view req = line.substr(bracket + 1);
    std::size_t close = req.find(']');
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated section marker: " + out.name);
    req = trim(req.substr(0, close));
    constexpr std::string_view key = "requires:";
    if (req.substr(0, key.size()) != key) throw std::invalid_argument("bad section marker: " + out.name);
    req = req.substr(key.size());
    while (!req.empty()) {
      std::size_t comma = req.find(',');
      std::string_view item = trim(req.substr(0, comma));
      if (!axiom_from_name(item)) throw std::invalid_argument("unknown axiom in section marker: " + std::string(item));
      out.requires_axioms.emplace_back(item);
      if (comma == std::string_view::npos) break;
      req.remove_prefix(comma + 1);
    }
  }
  return true;
}

}  // namespace detail

// Splits source text at section markers. The marker line belongs to no section.
inline std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> out(1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::size_t next = eol == std::string_view::npos ? text.size() : eol + 1;
    Section s;
    if (detail::parse_marker(text.substr(pos, next - pos), s)) {
      out.back().text = text.substr(out.back().offset, pos - out.back().offset);
      s.offset = next;
      out.push_back(std::move(s));
    }
    pos = next;
  }
  out.back().text = text.substr(out.back().offset);
  return out;
}

inline bool section_enabled(const Section& s, const AxiomSet& axioms) {
  for (const auto& a : s.requires_axioms)
    if (!axioms.contains(a)) return false;
  return true;
}

// Checks prelude source, skipping sections whose axioms are disabled.
inline void load_into(CheckedModule& m, std::string_view text, const AxiomSet& axioms) {
  for (const Section& s : split_sections(text)) {
    if (!section_enabled(s, axioms)) {
      m.note_skipped(s.name);
      continue;
    }
    check_source(m, s.text, s.offset, s.name, validate_axiom);
  }
}

inline CheckedModule load_prelude_text(std::string_view text, const AxiomSet& axioms = AxiomSet::all()) {
  CheckedModule m;
  load_into(m, text, axioms);
  return m;
}

inline CheckedModule load_prelude(const AxiomSet& axioms = AxiomSet::all(),
                                  const std::string& path = default_prelude_path()) {
  return load_prelude_text(read_file(path), axioms);
}

inline const CheckedDeclaration& lemma(const CheckedModule& m, const std::string& name) {
  const CheckedDeclaration* d = m.find(name);
  if (!d) throw UnknownLemma(name);
  return *d;
}

inline Term lemma_type(const CheckedModule& m, const std::string& name) { return lemma(m, name).type; }

}  // namespace hott
