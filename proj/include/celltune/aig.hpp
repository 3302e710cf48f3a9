/*!
  \file aig.hpp
  \brief Structurally hashed and-inverter graph
*/

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace celltune {

/*! \brief AIG edge encoded as 2 * var + complement (AIGER convention).
 *
 * Variable 0 is reserved for the constant, so literal 0 is constant false
 * and literal 1 is constant true.
 */
struct literal {
  std::uint32_t value = 0;

  constexpr literal() = default;
  constexpr explicit literal(std::uint32_t v) : value(v) {}

  static constexpr literal from_var(std::uint32_t var, bool complement = false) {
    return literal((var << 1) | (complement ? 1u : 0u));
  }

  constexpr std::uint32_t var() const { return value >> 1; }
  constexpr bool complemented() const { return (value & 1u) != 0; }
  constexpr bool is_constant() const { return var() == 0; }

  constexpr literal operator!() const { return literal(value ^ 1u); }

  friend constexpr bool operator==(literal, literal) = default;
  friend constexpr auto operator<=>(literal, literal) = default;
};

inline constexpr literal const_false{0};
inline constexpr literal const_true{1};

/*! \brief Combinational and-inverter graph.
 *
 * Variables: 0 is the constant, 1..num_inputs() are primary inputs, then one
 * variable per AND node in topological order. and2() folds constants, keeps
 * fanin0 <= fanin1 and never creates two nodes with the same fanin pair.
 */
class aig {
public:
  struct and_node {
    literal fanin0, fanin1;
  };

  literal add_input(std::string name = {}) {
    input_names_.push_back(std::move(name));
    return literal::from_var(static_cast<std::uint32_t>(input_names_.size()));
  }

  literal input_literal(std::uint32_t index) const {
    return literal::from_var(index + 1);
  }

  literal and2(literal a, literal b) {
    check_defined(a);
    check_defined(b);
    if (a == const_false || b == const_false) return const_false;
    if (a == const_true) return b;
    if (b == const_true) return a;
    if (a == b) return a;
    if (a == !b) return const_false;
    if (b < a) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a.value) << 32) | b.value;
    if (auto it = strash_.find(key); it != strash_.end()) {
      return literal::from_var(it->second);
    }
    nodes_.push_back({a, b});
    const auto var = static_cast<std::uint32_t>(num_inputs() + nodes_.size());
    strash_.emplace(key, var);
    return literal::from_var(var);
  }

  literal or2(literal a, literal b) { return !and2(!a, !b); }
  literal xor2(literal a, literal b) { return or2(and2(a, !b), and2(!a, b)); }
  literal mux(literal sel, literal then_, literal else_) {
    return or2(and2(sel, then_), and2(!sel, else_));
  }

  //! balanced conjunction; empty input gives constant true
  literal and_n(std::vector<literal> ls) {
    if (ls.empty()) return const_true;
    while (ls.size() > 1) {
      std::vector<literal> next;
      next.reserve((ls.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < ls.size(); i += 2) {
        next.push_back(and2(ls[i], ls[i + 1]));
      }
      if (ls.size() % 2) next.push_back(ls.back());
      ls = std::move(next);
    }
    return ls.front();
  }

  //! balanced disjunction; empty input gives constant false
  literal or_n(std::vector<literal> ls) {
    if (ls.empty()) return const_false;
    for (auto& l : ls) l = !l;
    return !and_n(std::move(ls));
  }

  void add_output(literal f, std::string name = {}) {
    check_defined(f);
    outputs_.push_back(f);
    output_names_.push_back(std::move(name));
  }

  std::uint32_t num_inputs() const { return static_cast<std::uint32_t>(input_names_.size()); }
  std::uint32_t num_ands() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t num_outputs() const { return static_cast<std::uint32_t>(outputs_.size()); }
  //! one past the largest variable index
  std::uint32_t num_vars() const { return 1 + num_inputs() + num_ands(); }

  bool is_input_var(std::uint32_t var) const { return var >= 1 && var <= num_inputs(); }
  bool is_and_var(std::uint32_t var) const { return var > num_inputs() && var < num_vars(); }

  //! node of an AND variable
  const and_node& node(std::uint32_t var) const { return nodes_[var - num_inputs() - 1]; }

  const std::vector<literal>& outputs() const { return outputs_; }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }

  std::vector<bool> simulate(const std::vector<bool>& inputs) const {
    if (inputs.size() != num_inputs()) {
      throw length_mismatch("simulate: expected " + std::to_string(num_inputs()) +
                            " input values, got " + std::to_string(inputs.size()));
    }
    std::vector<bool> value(num_vars(), false);
    for (std::uint32_t i = 0; i < num_inputs(); ++i) {
      value[i + 1] = inputs[i];
    }
    const auto eval = [&value](literal l) { return value[l.var()] != l.complemented(); };
    for (std::uint32_t i = 0; i < num_ands(); ++i) {
      value[num_inputs() + 1 + i] = eval(nodes_[i].fanin0) && eval(nodes_[i].fanin1);
    }
    std::vector<bool> out(num_outputs());
    for (std::uint32_t i = 0; i < num_outputs(); ++i) {
      out[i] = eval(outputs_[i]);
    }
    return out;
  }

  //! fanins reference strictly smaller variables and stay ordered
  bool verify_topological() const {
    for (std::uint32_t i = 0; i < num_ands(); ++i) {
      const std::uint32_t var = num_inputs() + 1 + i;
      const auto& n = nodes_[i];
      if (n.fanin0.var() >= var || n.fanin1.var() >= var) return false;
      if (n.fanin1 < n.fanin0) return false;
    }
    return true;
  }

private:
  void check_defined(literal l) const {
    if (l.var() >= num_vars()) {
      throw error("literal " + std::to_string(l.value) + " references an undefined variable");
    }
  }

  std::vector<std::string> input_names_;
  std::vector<and_node> nodes_;
  std::vector<literal> outputs_;
  std::vector<std::string> output_names_;
  std::unordered_map<std::uint64_t, std::uint32_t> strash_;
};

} // namespace celltune
