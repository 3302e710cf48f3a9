/*!
  \file cell_library.hpp
  \brief Standard cells, libraries and tunable sub-libraries
*/

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "function_expr.hpp"
#include "truth_table.hpp"

namespace celltune {

/*! \brief Combinational standard cell with a linear delay model per pin.
 *
 * Pin i is table variable i of `function`. The delay of the arc through pin
 * i is intrinsic[i] + slope[i] * load on the output net.
 */
struct cell {
  std::string name;
  std::uint8_t num_inputs = 0;
  truth_table function = 0;
  std::vector<std::string> pins;
  double area = 0.0;
  std::vector<double> input_caps;
  std::vector<double> intrinsic;
  std::vector<double> slope;

  bool is_inverter() const { return num_inputs == 1 && function == tt_negation; }
};

namespace detail {

inline void validate_cell(const cell& c) {
  if (c.name.empty()) {
    throw schema_error("cell with empty name");
  }
  if (c.num_inputs < 1) {
    throw schema_error("cell \"" + c.name + "\" has no inputs");
  }
  if (c.num_inputs > max_cut_size) {
    throw too_many_inputs("cell \"" + c.name + "\" has " + std::to_string(c.num_inputs) +
                          " inputs, at most " + std::to_string(max_cut_size) + " supported");
  }
  if (c.pins.size() != c.num_inputs || c.input_caps.size() != c.num_inputs ||
      c.intrinsic.size() != c.num_inputs || c.slope.size() != c.num_inputs) {
    throw schema_error("cell \"" + c.name + "\": per-pin arrays must match the input count");
  }
  if (!(c.area > 0.0)) {
    throw schema_error("cell \"" + c.name + "\": area must be positive");
  }
  for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
    if (c.input_caps[i] < 0.0 || c.intrinsic[i] < 0.0 || c.slope[i] < 0.0) {
      throw schema_error("cell \"" + c.name + "\": negative pin parameter");
    }
  }
  if ((c.function & ~tt_mask(c.num_inputs)) != 0) {
    throw schema_error("cell \"" + c.name + "\": truth table exceeds the pin count");
  }
  for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
    if (!tt_depends_on(c.function, c.num_inputs, i)) {
      throw vacuous_pin_error("cell \"" + c.name + "\": function does not depend on pin \"" +
                              c.pins[i] + "\"");
    }
  }
}

} // namespace detail

/*! \brief Ordered collection of cells; the tuner treats cell indices as arms. */
class cell_library {
public:
  cell_library(std::string name, std::vector<cell> cells)
      : name_(std::move(name)), cells_(std::move(cells)) {
    if (cells_.size() < 2) {
      throw schema_error("library \"" + name_ + "\" needs at least two cells");
    }
    std::set<std::string> seen;
    for (const auto& c : cells_) {
      detail::validate_cell(c);
      if (!seen.insert(c.name).second) {
        throw schema_error("duplicate cell name \"" + c.name + "\"");
      }
    }
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return cells_.size(); }
  const cell& at(std::size_t i) const { return cells_.at(i); }
  const std::vector<cell>& cells() const { return cells_; }

private:
  std::string name_;
  std::vector<cell> cells_;
};

/*! \brief Multi-hot selection over a parent library. */
class sub_library {
public:
  sub_library(const cell_library& parent, std::vector<std::uint8_t> selected)
      : parent_(&parent), selected_(std::move(selected)) {
    if (selected_.size() != parent.size()) {
      throw length_mismatch("selection has " + std::to_string(selected_.size()) +
                            " entries for " + std::to_string(parent.size()) + " cells");
    }
    for (std::size_t i = 0; i < selected_.size(); ++i) {
      if (selected_[i]) {
        indices_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    if (indices_.empty()) {
      throw empty_selection("sub-library selects no cells");
    }
  }

  const cell_library& parent() const { return *parent_; }
  const std::vector<std::uint8_t>& selected() const { return selected_; }
  //! selected parent cell indices, ascending
  const std::vector<std::uint32_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::uint32_t cell_index) const { return selected_[cell_index] != 0; }

private:
  const cell_library* parent_;
  std::vector<std::uint8_t> selected_;
  std::vector<std::uint32_t> indices_;
};

inline sub_library make_sublibrary(const cell_library& parent,
                                   const std::vector<std::uint8_t>& selected) {
  return sub_library(parent, selected);
}

inline sub_library full_sublibrary(const cell_library& parent) {
  return sub_library(parent, std::vector<std::uint8_t>(parent.size(), 1));
}

/*! \brief Groups cell indices by (arity, truth table); each group is sorted
 * by ascending area, ties by name. Sizing swaps stay within one group. */
inline std::map<std::pair<std::uint8_t, truth_table>, std::vector<std::uint32_t>>
function_classes(const cell_library& lib, const std::vector<std::uint32_t>& indices) {
  std::map<std::pair<std::uint8_t, truth_table>, std::vector<std::uint32_t>> classes;
  for (std::uint32_t idx : indices) {
    const cell& c = lib.at(idx);
    classes[{c.num_inputs, c.function}].push_back(idx);
  }
  for (auto& [key, group] : classes) {
    (void)key;
    std::sort(group.begin(), group.end(), [&lib](std::uint32_t a, std::uint32_t b) {
      const cell& ca = lib.at(a);
      const cell& cb = lib.at(b);
      if (ca.area != cb.area) return ca.area < cb.area;
      return ca.name < cb.name;
    });
  }
  return classes;
}

inline auto function_classes(const cell_library& lib) {
  std::vector<std::uint32_t> all(lib.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = static_cast<std::uint32_t>(i);
  }
  return function_classes(lib, all);
}

inline auto function_classes(const sub_library& sub) {
  return function_classes(sub.parent(), sub.indices());
}

/*! \brief Loads the native JSON library format.
 *
 * Schema: {"name": str, "cells": [{"name": str, "area": num, "pins":
 * [{"name": str, "cap": num, "intrinsic": num, "slope": num}], "function":
 * str}]}. Functions use !, &, |, ^ and parentheses over the pin names.
 */
inline cell_library load_native(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw schema_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("name") || !j.contains("cells")) {
      throw schema_error("library document needs \"name\" and \"cells\"");
    }
    std::vector<cell> cells;
    for (const auto& jc : j.at("cells")) {
      cell c;
      c.name = jc.at("name").get<std::string>();
      c.area = jc.at("area").get<double>();
      const auto& jpins = jc.at("pins");
      if (!jpins.is_array() || jpins.empty()) {
        throw schema_error("cell \"" + c.name + "\": \"pins\" must be a non-empty array");
      }
      if (jpins.size() > max_cut_size) {
        throw too_many_inputs("cell \"" + c.name + "\" has " + std::to_string(jpins.size()) +
                              " pins, at most " + std::to_string(max_cut_size) + " supported");
      }
      for (const auto& jp : jpins) {
        c.pins.push_back(jp.at("name").get<std::string>());
        c.input_caps.push_back(jp.at("cap").get<double>());
        c.intrinsic.push_back(jp.at("intrinsic").get<double>());
        c.slope.push_back(jp.at("slope").get<double>());
      }
      c.num_inputs = static_cast<std::uint8_t>(c.pins.size());
      c.function = compile_function(jc.at("function").get<std::string>(), c.pins);
      cells.push_back(std::move(c));
    }
    return cell_library(j.at("name").get<std::string>(), std::move(cells));
  } catch (const nlohmann::json::exception& e) {
    throw schema_error(std::string("library document malformed: ") + e.what());
  }
}

/*! \brief Renders a cell function as sum of minterms over its pin names. */
inline std::string function_string(const cell& c) {
  if (c.function == 0) {
    return "0";
  }
  std::string out;
  for (unsigned p = 0; p < tt_num_patterns(c.num_inputs); ++p) {
    if (!tt_bit(c.function, p)) {
      continue;
    }
    if (!out.empty()) {
      out += " | ";
    }
    std::string term;
    for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
      if (!term.empty()) {
        term += " & ";
      }
      if (!((p >> i) & 1u)) {
        term += "!";
      }
      term += c.pins[i];
    }
    out += c.num_inputs > 1 ? "(" + term + ")" : term;
  }
  return out;
}

/*! \brief Serializes a library to the native JSON format; load_native of the
 * result reproduces the library exactly. */
inline std::string save_native(const cell_library& lib) {
  nlohmann::json j;
  j["name"] = lib.name();
  j["cells"] = nlohmann::json::array();
  for (const auto& c : lib.cells()) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["area"] = c.area;
    jc["pins"] = nlohmann::json::array();
    for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
      jc["pins"].push_back({{"name", c.pins[i]},
                            {"cap", c.input_caps[i]},
                            {"intrinsic", c.intrinsic[i]},
                            {"slope", c.slope[i]}});
    }
    // regenerate a function string from the truth table pins
    jc["function"] = function_string(c);
    j["cells"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

} // namespace celltune
