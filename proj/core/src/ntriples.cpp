#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "litgraph/error.hpp"
#include "litgraph/kg_store.hpp"

namespace litgraph {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_space() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  // Returns the stored label for the next term.
  std::string term(bool allow_literal, const char* role) {
    skip_space();
    if (at_end() || peek() == '.' || peek() == '#') {
      fail(std::string("expected ") + role + " term (fewer than 3 terms)");
    }
    switch (peek()) {
      case '<': return iri();
      case '_': return blank_node();
      case '"':
        if (!allow_literal) fail(std::string("literal not allowed as ") + role);
        return literal();
      default:
        fail(std::string("unexpected character '") + peek() + "' in " + role);
    }
  }

  void terminator() {
    skip_space();
    if (at_end() || peek() != '.') fail("missing statement terminator '.'");
    ++pos_;
    skip_space();
    if (!at_end() && peek() != '#') fail("trailing content after terminator");
  }

 private:
  std::string iri() {
    const auto close = s_.find('>', pos_ + 1);
    if (close == std::string_view::npos) fail("unterminated IRI");
    std::string out(s_.substr(pos_ + 1, close - pos_ - 1));
    if (out.empty()) fail("empty IRI");
    pos_ = close + 1;
    return out;
  }

  std::string blank_node() {
    if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != ':') fail("malformed blank node");
    const auto start = pos_;
    pos_ += 2;
    while (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '.') ++pos_;
    if (pos_ == start + 2) fail("empty blank node label");
    return std::string(s_.substr(start, pos_ - start));
  }

  // Kept verbatim (quotes, escapes, @lang / ^^<datatype>).
  std::string literal() {
    const auto start = pos_++;
    bool closed = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("dangling escape in literal");
        ++pos_;
      } else if (c == '"') {
        closed = true;
        break;
      }
    }
    if (!closed) fail("unterminated literal");
    if (pos_ < s_.size() && s_[pos_] == '@') {
      ++pos_;
      while (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '.') ++pos_;
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (pos_ >= s_.size() || s_[pos_] != '<') fail("datatype must be an IRI");
      iri();
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && (is_space(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::string format_term(const std::string& label) {
  if (!label.empty() && (label.front() == '"' || label.starts_with("_:"))) return label;
  return "<" + label + ">";
}

}  // namespace

std::vector<RawTriple> parse_ntriples(std::istream& in) {
  std::vector<RawTriple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    LineCursor cur(body, line_no);
    RawTriple t;
    t.head = cur.term(false, "subject");
    t.relation = cur.term(false, "predicate");
    if (t.relation.starts_with("_:")) cur.fail("blank node not allowed as predicate");
    t.tail = cur.term(true, "object");
    cur.terminator();
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RawTriple> parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ntriples(in);
}

std::vector<RawTriple> parse_tsv_triples(std::istream& in) {
  std::vector<RawTriple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols;
    std::string_view rest = line;
    for (;;) {
      const auto tab = rest.find('\t');
      cols.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (cols.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    for (const auto c : cols) {
      if (c.empty()) throw ParseError(line_no, "empty column");
    }
    out.push_back({std::string(cols[0]), std::string(cols[1]), std::string(cols[2])});
  }
  return out;
}

std::vector<RawTriple> parse_tsv_triples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_tsv_triples(in);
}

std::vector<RawTriple> read_triples_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open triple file: " + path.string());
  if (path.extension() == ".nt") return parse_ntriples(in);
  return parse_tsv_triples(in);
}

void write_ntriples(std::ostream& out, const KnowledgeGraph& graph) {
  write_ntriples(out, graph, graph.edges());
}

void write_ntriples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> edges) {
  for (const auto& t : edges) {
    out << format_term(graph.entity_label(t.head)) << ' ' << format_term(graph.relation_label(t.relation))
        << ' ' << format_term(graph.entity_label(t.tail)) << " .\n";
  }
}

void write_tsv_triples(std::ostream& out, const KnowledgeGraph& graph, std::span<const Triple> edges) {
  for (const auto& t : edges) {
    out << graph.entity_label(t.head) << '\t' << graph.relation_label(t.relation) << '\t'
        << graph.entity_label(t.tail) << '\n';
  }
}

}  // namespace litgraph
