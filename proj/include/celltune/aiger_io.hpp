/*!
  \file aiger_io.hpp
  \brief ASCII AIGER reader and writer
*/

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aig.hpp"
#include "errors.hpp"

namespace celltune {

/*! \brief Parses an ASCII AIGER ("aag") file.
 *
 * Latches are cut into the combinational frame: current-state literals
 * become primary inputs and next-state literals primary outputs (appended
 * after the declared outputs). Structural hashing is re-applied while
 * rebuilding, so redundant ANDs in the file may merge. Requires the
 * canonical literal layout: input i is literal 2i, ANDs follow inputs and
 * latches with ascending left-hand sides.
 */
inline aig parse_aiger_ascii(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw header_mismatch(std::string("missing ") + what + " line", line_no);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
  };

  next_line("header");
  std::uint64_t m = 0, i = 0, l = 0, o = 0, a = 0;
  {
    std::istringstream hs(line);
    std::string magic;
    if (!(hs >> magic >> m >> i >> l >> o >> a) || magic != "aag") {
      throw syntax_error("expected header \"aag M I L O A\"", line_no);
    }
    std::string rest;
    if (hs >> rest) {
      throw syntax_error("trailing header fields", line_no);
    }
  }
  if (m != i + l + a) {
    throw header_mismatch("M must equal I + L + A", line_no);
  }

  auto parse_literals = [&](std::size_t count, const char* what) {
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::size_t k = 0; k < count; ++k) {
      next_line(what);
      std::istringstream ls(line);
      std::vector<std::uint64_t> vals;
      std::uint64_t v;
      while (ls >> v) {
        vals.push_back(v);
      }
      if (!ls.eof()) {
        throw syntax_error(std::string("malformed ") + what + " line", line_no);
      }
      rows.push_back(std::move(vals));
    }
    return rows;
  };

  const auto input_rows = parse_literals(i, "input");
  const auto latch_rows = parse_literals(l, "latch");
  const auto output_rows = parse_literals(o, "output");
  const auto and_rows = parse_literals(a, "and");

  // anything but symbol/comment sections after the body is a count mismatch
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const char c = line[0];
    if (c == 'c') {
      break; // comment section runs to EOF
    }
    if (c == 'i' || c == 'l' || c == 'o') {
      continue; // symbol table entry
    }
    throw header_mismatch("more body lines than the header declares", line_no);
  }

  aig g;
  // file variable -> rebuilt literal for that variable uncomplemented
  std::vector<literal> mapped(m + 1, const_false);
  std::vector<bool> defined(m + 1, false);
  defined[0] = true;

  auto map_literal = [&](std::uint64_t file_lit, std::size_t at) {
    const std::uint64_t var = file_lit >> 1;
    if (var > m || !defined[var]) {
      throw syntax_error("literal " + std::to_string(file_lit) + " is undefined", at);
    }
    const literal base = mapped[var];
    return (file_lit & 1) ? !base : base;
  };

  for (std::size_t k = 0; k < input_rows.size(); ++k) {
    if (input_rows[k].size() != 1 || input_rows[k][0] != 2 * (k + 1)) {
      throw syntax_error("input " + std::to_string(k) + " must be literal " +
                             std::to_string(2 * (k + 1)),
                         line_no);
    }
    mapped[k + 1] = g.add_input();
    defined[k + 1] = true;
  }
  for (std::size_t k = 0; k < latch_rows.size(); ++k) {
    const std::uint64_t var = i + k + 1;
    if (latch_rows[k].size() < 2 || latch_rows[k][0] != 2 * var) {
      throw syntax_error("latch " + std::to_string(k) + " must define literal " +
                             std::to_string(2 * var),
                         line_no);
    }
    mapped[var] = g.add_input();
    defined[var] = true;
  }
  for (std::size_t k = 0; k < and_rows.size(); ++k) {
    const std::uint64_t var = i + l + k + 1;
    const auto& row = and_rows[k];
    if (row.size() != 3 || row[0] != 2 * var) {
      throw syntax_error("and " + std::to_string(k) + " must define literal " +
                             std::to_string(2 * var),
                         line_no);
    }
    if ((row[1] >> 1) >= var || (row[2] >> 1) >= var) {
      throw syntax_error("and fanins must reference earlier variables", line_no);
    }
    mapped[var] = g.and2(map_literal(row[1], line_no), map_literal(row[2], line_no));
    defined[var] = true;
  }
  for (const auto& row : output_rows) {
    if (row.size() != 1) {
      throw syntax_error("output lines carry exactly one literal", line_no);
    }
    g.add_output(map_literal(row[0], line_no));
  }
  for (const auto& row : latch_rows) {
    g.add_output(map_literal(row[1], line_no));
  }
  return g;
}

inline aig parse_aiger_ascii(const std::string& text) {
  std::istringstream is(text);
  return parse_aiger_ascii(is);
}

/*! \brief Writes the AIG as ASCII AIGER (always latch-free). */
inline void write_aiger_ascii(const aig& g, std::ostream& os) {
  os << "aag " << (g.num_inputs() + g.num_ands()) << ' ' << g.num_inputs() << " 0 "
     << g.num_outputs() << ' ' << g.num_ands() << '\n';
  for (std::uint32_t k = 0; k < g.num_inputs(); ++k) {
    os << 2 * (k + 1) << '\n';
  }
  for (literal out : g.outputs()) {
    os << out.value << '\n';
  }
  for (std::uint32_t k = 0; k < g.num_ands(); ++k) {
    const std::uint32_t var = g.num_inputs() + 1 + k;
    const auto& n = g.node(var);
    os << 2 * var << ' ' << n.fanin0.value << ' ' << n.fanin1.value << '\n';
  }
  for (std::uint32_t k = 0; k < g.num_inputs(); ++k) {
    if (!g.input_names()[k].empty()) {
      os << 'i' << k << ' ' << g.input_names()[k] << '\n';
    }
  }
  for (std::uint32_t k = 0; k < g.num_outputs(); ++k) {
    if (!g.output_names()[k].empty()) {
      os << 'o' << k << ' ' << g.output_names()[k] << '\n';
    }
  }
}

inline std::string write_aiger_ascii(const aig& g) {
  std::ostringstream os;
  write_aiger_ascii(g, os);
  return os.str();
}

} // namespace celltune
