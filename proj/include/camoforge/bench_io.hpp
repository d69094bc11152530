/* camoforge
 *
 * bench_io.hpp -- ISCAS85 .bench reader/writer plus the CAMO dialect
 * extension (`y = CAMO(a)` for keyed buffer/inverter blocks).
 */
#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "netlist.hpp"

namespace camoforge {

namespace detail {

struct BenchCursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
};

[[noreturn]] inline void parse_fail(const BenchCursor& c, const std::string& message) {
  throw Error("parse", "line " + std::to_string(c.line) + ", col " + std::to_string(c.col) +
                           ": " + message);
}

inline void skip_blank(BenchCursor& c) {
  while (!c.eof() && (c.peek() == ' ' || c.peek() == '\t' || c.peek() == '\r')) c.advance();
}

inline std::string read_identifier(BenchCursor& c) {
  skip_blank(c);
  std::string out;
  while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_')) {
    out.push_back(c.peek());
    c.advance();
  }
  if (out.empty()) parse_fail(c, "expected a net name");
  return out;
}

inline void expect(BenchCursor& c, char ch) {
  skip_blank(c);
  if (c.eof() || c.peek() != ch)
    parse_fail(c, std::string("expected '") + ch + "'");
  c.advance();
}

inline void skip_to_eol(BenchCursor& c) {
  while (!c.eof() && c.peek() != '\n') c.advance();
  if (!c.eof()) c.advance();
}

}  // namespace detail

/// Parse ISCAS85 bench text (UTF-8, LF or CRLF, `#` comments) into a
/// validated Netlist. Declaration order of INPUT/OUTPUT lines is preserved.
/// Errors carry line/column positions; netlist-level violations (duplicate
/// nets, undefined fanins, cycles, arity) are reported by validation.
inline Netlist parse_bench(std::string_view text) {
  detail::BenchCursor c{text};
  std::vector<std::string> pis, pos;
  std::vector<Gate> gates;

  while (!c.eof()) {
    detail::skip_blank(c);
    if (c.eof()) break;
    char ch = c.peek();
    if (ch == '\n') {
      c.advance();
      continue;
    }
    if (ch == '#') {
      detail::skip_to_eol(c);
      continue;
    }
    std::string first = detail::read_identifier(c);
    detail::skip_blank(c);
    if (!c.eof() && c.peek() == '(') {
      // INPUT(x) / OUTPUT(y)
      c.advance();
      std::string net = detail::read_identifier(c);
      detail::expect(c, ')');
      if (first == "INPUT") {
        pis.push_back(net);
      } else if (first == "OUTPUT") {
        pos.push_back(net);
      } else {
        detail::parse_fail(c, "unknown directive '" + first + "' (expected INPUT or OUTPUT)");
      }
    } else {
      // name = KIND(a, b, ...)
      detail::expect(c, '=');
      std::string kind_str = detail::read_identifier(c);
      auto kind = gate_kind_from_string(kind_str);
      if (!kind || *kind == GateKind::Input)
        detail::parse_fail(c, "unknown gate kind '" + kind_str + "'");
      detail::expect(c, '(');
      Gate g;
      g.name = std::move(first);
      g.kind = *kind;
      g.fanins.push_back(detail::read_identifier(c));
      detail::skip_blank(c);
      while (!c.eof() && c.peek() == ',') {
        c.advance();
        g.fanins.push_back(detail::read_identifier(c));
        detail::skip_blank(c);
      }
      detail::expect(c, ')');
      gates.push_back(std::move(g));
    }
    detail::skip_blank(c);
    if (!c.eof() && c.peek() == '#') {
      detail::skip_to_eol(c);
      continue;
    }
    if (!c.eof() && c.peek() != '\n')
      detail::parse_fail(c, "trailing characters after statement");
  }

  return Netlist::build(std::move(gates), std::move(pis), std::move(pos));
}

/// Serialize in canonical form: INPUTs, OUTPUTs, then gates in topological
/// order. parse_bench(write_bench(n)) reproduces n up to gate ordering, with
/// identical net names and PI/PO order. An empty netlist yields an empty
/// document.
inline std::string write_bench(const Netlist& n) {
  std::ostringstream out;
  for (const std::string& p : n.primary_inputs()) out << "INPUT(" << p << ")\n";
  for (const std::string& p : n.primary_outputs()) out << "OUTPUT(" << p << ")\n";
  bool first_gate = true;
  for (int id : n.topo_order()) {
    if (!n.is_gate(id)) continue;
    if (first_gate && (n.n_pis() > 0 || n.n_pos() > 0)) out << "\n";
    first_gate = false;
    const Gate& g = n.gate(id);
    out << g.name << " = " << to_string(g.kind) << "(";
    for (std::size_t i = 0; i < g.fanins.size(); ++i) {
      if (i) out << ", ";
      out << g.fanins[i];
    }
    out << ")\n";
  }
  return out.str();
}

}  // namespace camoforge
