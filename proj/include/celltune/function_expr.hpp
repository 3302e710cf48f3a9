/*!
  \file function_expr.hpp
  \brief Compiles Boolean expressions over pin names into truth tables
*/

#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "truth_table.hpp"

namespace celltune {

namespace detail {

/*! Recursive-descent parser for the expression grammar
 *
 *   or   := xor (('|' | '+') xor)*
 *   xor  := and ('^' and)*
 *   and  := lit (('&' | '*') lit)*
 *   lit  := '!' lit | prim ('\'')*
 *   prim := '(' or ')' | '0' | '1' | pin
 *
 * '!' binds prefix, '\'' postfix; both appear in Liberty-style functions.
 */
class function_parser {
public:
  function_parser(std::string_view expr, const std::vector<std::string>& pins)
      : expr_(expr), pins_(pins), num_vars_(static_cast<unsigned>(pins.size())) {}

  truth_table run() {
    const truth_table t = parse_or();
    skip_ws();
    if (pos_ != expr_.size()) {
      fail("trailing input");
    }
    return t;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw function_parse_error("cannot parse function \"" + std::string(expr_) +
                               "\": " + why);
  }

  void skip_ws() {
    while (pos_ < expr_.size() && std::isspace(static_cast<unsigned char>(expr_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < expr_.size() && expr_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  truth_table parse_or() {
    truth_table t = parse_xor();
    for (;;) {
      if (eat('|') || eat('+')) {
        t |= parse_xor();
      } else {
        return t;
      }
    }
  }

  truth_table parse_xor() {
    truth_table t = parse_and();
    while (eat('^')) {
      t ^= parse_and();
    }
    return t;
  }

  truth_table parse_and() {
    truth_table t = parse_lit();
    for (;;) {
      if (eat('&') || eat('*')) {
        t &= parse_lit();
      } else {
        return t;
      }
    }
  }

  truth_table parse_lit() {
    if (eat('!')) {
      return tt_mask(num_vars_) & static_cast<truth_table>(~parse_lit());
    }
    truth_table t = parse_prim();
    while (eat('\'')) {
      t = tt_mask(num_vars_) & static_cast<truth_table>(~t);
    }
    return t;
  }

  truth_table parse_prim() {
    if (eat('(')) {
      const truth_table t = parse_or();
      if (!eat(')')) {
        fail("missing ')'");
      }
      return t;
    }
    skip_ws();
    if (pos_ >= expr_.size()) {
      fail("unexpected end of expression");
    }
    const std::size_t start = pos_;
    while (pos_ < expr_.size() && (std::isalnum(static_cast<unsigned char>(expr_[pos_])) ||
                                   expr_[pos_] == '_' || expr_[pos_] == '[' ||
                                   expr_[pos_] == ']')) {
      ++pos_;
    }
    if (pos_ == start) {
      fail(std::string("unexpected character '") + expr_[pos_] + "'");
    }
    const std::string_view tok = expr_.substr(start, pos_ - start);
    if (tok == "0") {
      return 0;
    }
    if (tok == "1") {
      return tt_mask(num_vars_);
    }
    for (unsigned i = 0; i < pins_.size(); ++i) {
      if (tok == pins_[i]) {
        return tt_var(i, num_vars_);
      }
    }
    fail("unknown pin \"" + std::string(tok) + "\"");
  }

  std::string_view expr_;
  const std::vector<std::string>& pins_;
  unsigned num_vars_;
  std::size_t pos_ = 0;
};

} // namespace detail

/*! \brief Evaluates `expr` over `pins` (pin i = table variable i).
 * Throws function_parse_error on malformed input or unknown pins. */
inline truth_table compile_function(std::string_view expr, const std::vector<std::string>& pins) {
  return detail::function_parser(expr, pins).run();
}

} // namespace celltune
