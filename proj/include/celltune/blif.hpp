/*!
  \file blif.hpp
  \brief Reader for the combinational BLIF subset
*/

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aig.hpp"
#include "errors.hpp"

namespace celltune {

namespace detail {

struct blif_names_block {
  std::vector<std::string> inputs;
  std::string output;
  std::vector<std::pair<std::string, char>> rows; // (input mask, output char)
  std::size_t line = 0;
};

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    out.push_back(tok);
  }
  return out;
}

//! lowers one SOP cover to a literal; `leaf` resolves input signal names
template<typename LeafFn>
literal lower_sop(aig& g, const blif_names_block& blk, LeafFn&& leaf) {
  char cover_value = 0;
  std::vector<literal> products;
  products.reserve(blk.rows.size());
  for (const auto& [mask, value] : blk.rows) {
    if (cover_value == 0) {
      cover_value = value;
    } else if (value != cover_value) {
      throw syntax_error("mixed output values in one cover", blk.line);
    }
    std::vector<literal> factors;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i] == '1') {
        factors.push_back(leaf(i));
      } else if (mask[i] == '0') {
        factors.push_back(!leaf(i));
      }
    }
    products.push_back(g.and_n(std::move(factors)));
  }
  if (products.empty()) {
    // a cover with no rows drives constant false
    return const_false;
  }
  const literal sum = g.or_n(std::move(products));
  return cover_value == '1' ? sum : !sum;
}

} // namespace detail

/*! \brief Parses the supported BLIF subset into an AIG.
 *
 * Directives: .model, .inputs, .outputs, .names, .latch, .end. '#' starts a
 * comment, a trailing backslash continues the line. Latches are cut into the
 * combinational frame: each latch output joins the primary inputs and each
 * latch input joins the primary outputs. Cover rows must agree on the output
 * value; a '1' cover is the OR of its products, a '0' cover its complement.
 * Blocks may appear in any dependency order.
 */
inline aig parse_blif(std::istream& in) {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<std::pair<std::string, std::string>> latches; // (data in, latched out)
  std::vector<detail::blif_names_block> blocks;
  std::map<std::string, std::size_t> block_of; // output signal -> block index

  std::string raw;
  std::size_t line_no = 0;
  bool saw_end = false;
  detail::blif_names_block* open_block = nullptr;

  auto read_logical_line = [&](std::string& out) -> bool {
    out.clear();
    std::string piece;
    while (std::getline(in, piece)) {
      ++line_no;
      if (auto hash = piece.find('#'); hash != std::string::npos) {
        piece.erase(hash);
      }
      while (!piece.empty() && (piece.back() == '\r' || piece.back() == ' ' || piece.back() == '\t')) {
        piece.pop_back();
      }
      if (!piece.empty() && piece.back() == '\\') {
        piece.pop_back();
        out += piece;
        continue;
      }
      out += piece;
      return true;
    }
    return false;
  };

  while (read_logical_line(raw)) {
    auto tokens = detail::split_tokens(raw);
    if (tokens.empty()) {
      continue;
    }
    if (saw_end) {
      throw syntax_error("content after .end", line_no);
    }
    const std::string& head = tokens.front();
    if (head[0] != '.') {
      // cover row of the open .names block
      if (!open_block) {
        throw syntax_error("cover row outside a .names block", line_no);
      }
      if (tokens.size() != (open_block->inputs.empty() ? 1u : 2u)) {
        throw syntax_error("malformed cover row", line_no);
      }
      const std::string mask = open_block->inputs.empty() ? std::string{} : tokens[0];
      const std::string& value = tokens.back();
      if (mask.size() != open_block->inputs.size()) {
        throw syntax_error("cover row arity mismatch", line_no);
      }
      for (char c : mask) {
        if (c != '0' && c != '1' && c != '-') {
          throw syntax_error(std::string("bad cover character '") + c + "'", line_no);
        }
      }
      if (value != "0" && value != "1") {
        throw syntax_error("cover output must be 0 or 1", line_no);
      }
      open_block->rows.emplace_back(mask, value[0]);
      continue;
    }
    open_block = nullptr;
    if (head == ".model") {
      continue;
    }
    if (head == ".inputs") {
      input_names.insert(input_names.end(), tokens.begin() + 1, tokens.end());
      continue;
    }
    if (head == ".outputs") {
      output_names.insert(output_names.end(), tokens.begin() + 1, tokens.end());
      continue;
    }
    if (head == ".names") {
      if (tokens.size() < 2) {
        throw syntax_error(".names needs an output signal", line_no);
      }
      detail::blif_names_block blk;
      blk.inputs.assign(tokens.begin() + 1, tokens.end() - 1);
      blk.output = tokens.back();
      blk.line = line_no;
      if (block_of.count(blk.output)) {
        throw syntax_error("signal \"" + blk.output + "\" defined twice", line_no);
      }
      block_of[blk.output] = blocks.size();
      blocks.push_back(std::move(blk));
      open_block = &blocks.back();
      continue;
    }
    if (head == ".latch") {
      if (tokens.size() < 3 || tokens.size() > 6) {
        throw syntax_error("malformed .latch", line_no);
      }
      latches.emplace_back(tokens[1], tokens[2]);
      continue;
    }
    if (head == ".end") {
      saw_end = true;
      continue;
    }
    throw unsupported_directive("unsupported directive \"" + head + "\"", line_no);
  }

  aig g;
  std::map<std::string, literal> signal;
  for (const auto& name : input_names) {
    if (signal.count(name)) {
      throw syntax_error("input \"" + name + "\" declared twice", 0);
    }
    signal[name] = g.add_input(name);
  }
  for (const auto& [d, q] : latches) {
    (void)d;
    if (signal.count(q) || block_of.count(q)) {
      throw syntax_error("latch output \"" + q + "\" collides with another definition", 0);
    }
    signal[q] = g.add_input(q);
  }

  for (const auto& blk : blocks) {
    if (signal.count(blk.output)) {
      throw syntax_error("signal \"" + blk.output + "\" defined twice", blk.line);
    }
  }

  // lower blocks in dependency order; blocks may be written in any order
  std::vector<std::uint8_t> state(blocks.size(), 0); // 0 new, 1 on stack, 2 done
  auto lower = [&](auto&& self, std::size_t bi) -> void {
    if (state[bi] == 2) return;
    if (state[bi] == 1) {
      throw syntax_error("combinational cycle through \"" + blocks[bi].output + "\"",
                         blocks[bi].line);
    }
    state[bi] = 1;
    for (const auto& dep : blocks[bi].inputs) {
      if (signal.count(dep)) continue;
      auto it = block_of.find(dep);
      if (it == block_of.end()) {
        throw undefined_signal("signal \"" + dep + "\" is never defined", blocks[bi].line);
      }
      self(self, it->second);
    }
    const auto& blk = blocks[bi];
    signal[blk.output] =
        detail::lower_sop(g, blk, [&](std::size_t i) { return signal.at(blk.inputs[i]); });
    state[bi] = 2;
  };
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    lower(lower, bi);
  }

  auto resolve = [&](const std::string& name, const char* role) {
    auto it = signal.find(name);
    if (it == signal.end()) {
      throw undefined_signal(std::string(role) + " \"" + name + "\" is never defined", 0);
    }
    return it->second;
  };
  for (const auto& name : output_names) {
    g.add_output(resolve(name, "output"), name);
  }
  for (const auto& [d, q] : latches) {
    (void)q;
    g.add_output(resolve(d, "latch input"), d);
  }
  return g;
}

inline aig parse_blif(const std::string& text) {
  std::istringstream is(text);
  return parse_blif(is);
}

} // namespace celltune
