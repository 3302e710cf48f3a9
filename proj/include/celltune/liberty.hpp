/*!
  \file liberty.hpp
  \brief Liberty subset importer with linear delay-model reduction
*/

#pragma once

#include <cctype>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "cell_library.hpp"
#include "errors.hpp"

namespace celltune {

struct liberty_import_report {
  struct skip_entry {
    std::string cell;
    std::string reason;
  };
  std::vector<skip_entry> skipped;
  std::vector<std::string> kept;
  std::vector<std::string> warnings;
};

struct liberty_import_result {
  cell_library library;
  liberty_import_report report;
};

namespace detail {

struct liberty_token {
  enum kind_t { ident, string, punct, eof } kind = eof;
  std::string text;
  std::size_t line = 0;
};

class liberty_lexer {
public:
  explicit liberty_lexer(std::string_view text) : text_(text) {}

  liberty_token next() {
    skip_space();
    liberty_token t;
    t.line = line_;
    if (pos_ >= text_.size()) {
      return t;
    }
    const char c = text_[pos_];
    if (c == '"') {
      ++pos_;
      t.kind = liberty_token::string;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') {
          ++line_;
        }
        t.text += text_[pos_++];
      }
      if (pos_ >= text_.size()) {
        throw syntax_error("unterminated string", t.line);
      }
      ++pos_;
      return t;
    }
    if (std::strchr("{}():;,", c)) {
      ++pos_;
      t.kind = liberty_token::punct;
      t.text = std::string(1, c);
      return t;
    }
    // identifiers and numbers, including signs, dots and exponents
    t.kind = liberty_token::ident;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(d)) || std::strchr("_.+-![]*'^&|/\\<>=", d)) {
        t.text += d;
        ++pos_;
      } else {
        break;
      }
    }
    if (t.text.empty()) {
      throw syntax_error(std::string("unexpected character '") + c + "'", line_);
    }
    return t;
  }

private:
  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '\n') {
          ++line_;
        }
        ++pos_;
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '*') {
        const std::size_t at = line_;
        pos_ += 2;
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          if (text_[pos_] == '\n') {
            ++line_;
          }
          ++pos_;
        }
        if (pos_ + 1 >= text_.size()) {
          throw syntax_error("unterminated comment", at);
        }
        pos_ += 2;
        continue;
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct liberty_attr {
  std::string name;
  std::vector<std::string> values;
  std::size_t line = 0;
};

struct liberty_group {
  std::string type;
  std::vector<std::string> args;
  std::vector<liberty_attr> attrs;
  std::vector<liberty_group> children;
  std::size_t line = 0;

  const liberty_attr* attr(std::string_view name) const {
    for (const auto& a : attrs) {
      if (a.name == name) {
        return &a;
      }
    }
    return nullptr;
  }
};

class liberty_parser {
public:
  explicit liberty_parser(std::string_view text) : lex_(text) { advance(); }

  liberty_group parse_library() {
    liberty_group root = parse_group();
    if (root.type != "library") {
      throw syntax_error("expected a library group", root.line);
    }
    if (cur_.kind != liberty_token::eof) {
      throw syntax_error("trailing content after library group", cur_.line);
    }
    return root;
  }

private:
  void advance() { cur_ = lex_.next(); }

  bool at_punct(const char* p) const {
    return cur_.kind == liberty_token::punct && cur_.text == p;
  }

  void expect_punct(const char* p) {
    if (!at_punct(p)) {
      throw syntax_error(std::string("expected '") + p + "'", cur_.line);
    }
    advance();
  }

  std::vector<std::string> parse_paren_values() {
    expect_punct("(");
    std::vector<std::string> values;
    while (!at_punct(")")) {
      if (cur_.kind == liberty_token::ident || cur_.kind == liberty_token::string) {
        values.push_back(cur_.text);
        advance();
      } else if (at_punct(",")) {
        advance();
      } else {
        throw syntax_error("malformed argument list", cur_.line);
      }
    }
    advance();
    return values;
  }

  liberty_group parse_group() {
    if (cur_.kind != liberty_token::ident) {
      throw syntax_error("expected a group name", cur_.line);
    }
    liberty_group g;
    g.type = cur_.text;
    g.line = cur_.line;
    advance();
    g.args = parse_paren_values();
    expect_punct("{");
    parse_group_body(g);
    return g;
  }

  void parse_group_body(liberty_group& g) {
    while (!at_punct("}")) {
      if (cur_.kind == liberty_token::eof) {
        throw syntax_error("unterminated group \"" + g.type + "\"", g.line);
      }
      if (cur_.kind != liberty_token::ident) {
        throw syntax_error("expected an attribute or group", cur_.line);
      }
      liberty_token name = cur_;
      advance();
      if (at_punct(":")) {
        advance();
        if (cur_.kind != liberty_token::ident && cur_.kind != liberty_token::string) {
          throw syntax_error("expected a value for \"" + name.text + "\"", cur_.line);
        }
        g.attrs.push_back({name.text, {cur_.text}, name.line});
        advance();
        expect_punct(";");
      } else if (at_punct("(")) {
        auto values = parse_paren_values();
        if (at_punct("{")) {
          liberty_group child;
          child.type = name.text;
          child.args = std::move(values);
          child.line = name.line;
          advance();
          parse_group_body(child);
          g.children.push_back(std::move(child));
        } else {
          expect_punct(";");
          g.attrs.push_back({name.text, std::move(values), name.line});
        }
      } else {
        throw syntax_error("expected ':' or '(' after \"" + name.text + "\"", cur_.line);
      }
    }
    advance();
  }

  liberty_lexer lex_;
  liberty_token cur_;
};

inline std::vector<double> parse_number_list(const std::string& text, std::size_t line) {
  std::vector<double> out;
  std::string tok;
  auto flush = [&]() {
    if (tok.empty()) {
      return;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) {
        throw std::invalid_argument(tok);
      }
    } catch (const std::exception&) {
      throw syntax_error("bad number \"" + tok + "\"", line);
    }
    tok.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c)) || c == '\\') {
      flush();
    } else {
      tok += c;
    }
  }
  flush();
  return out;
}

struct liberty_table {
  std::vector<double> index_1;
  std::vector<double> values; // first row only; the slew axis collapses
};

inline liberty_table read_table(const liberty_group& tbl) {
  liberty_table out;
  if (const auto* idx = tbl.attr("index_1")) {
    if (!idx->values.empty()) {
      out.index_1 = parse_number_list(idx->values.front(), idx->line);
    }
  }
  if (const auto* vals = tbl.attr("values")) {
    if (!vals->values.empty()) {
      out.values = parse_number_list(vals->values.front(), vals->line);
    }
  }
  if (out.index_1.empty() || out.values.empty()) {
    throw syntax_error("table \"" + tbl.type + "\" needs index_1 and values", tbl.line);
  }
  if (out.values.size() != out.index_1.size()) {
    throw syntax_error("table \"" + tbl.type + "\" row length does not match index_1",
                       tbl.line);
  }
  return out;
}

/*! reduces a load-indexed delay table to (intrinsic, slope): intrinsic is
 * the value at the smallest load, slope the least-squares fit, both clamped
 * at zero */
inline std::pair<double, double> fit_linear(const std::vector<double>& loads,
                                            const std::vector<double>& values) {
  std::size_t min_at = 0;
  for (std::size_t i = 1; i < loads.size(); ++i) {
    if (loads[i] < loads[min_at]) {
      min_at = i;
    }
  }
  double intrinsic = values[min_at];
  double slope = 0.0;
  if (loads.size() > 1) {
    double mean_l = 0.0, mean_v = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
      mean_l += loads[i];
      mean_v += values[i];
    }
    mean_l /= static_cast<double>(loads.size());
    mean_v /= static_cast<double>(loads.size());
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
      cov += (loads[i] - mean_l) * (values[i] - mean_v);
      var += (loads[i] - mean_l) * (loads[i] - mean_l);
    }
    if (var > 0.0) {
      slope = cov / var;
    }
  }
  if (intrinsic < 0.0) {
    intrinsic = 0.0;
  }
  if (slope < 0.0) {
    slope = 0.0;
  }
  return {intrinsic, slope};
}

} // namespace detail

/*! \brief Imports a Liberty library, reducing NLDM tables to the linear
 * delay model.
 *
 * Per input pin, the cell_rise and cell_fall tables of the matching timing
 * arc are averaged (first slew row, elementwise over the index_1 load axis);
 * the intrinsic is the averaged value at the smallest load and the slope the
 * least-squares fit against index_1, both clamped at zero. Cells that do not
 * fit the model (more than four inputs, missing function, sequential or
 * tristate outputs, unused pins) are skipped and reported.
 */
inline liberty_import_result import_liberty(const std::string& text) {
  detail::liberty_parser parser(text);
  const detail::liberty_group root = parser.parse_library();

  liberty_import_report report;
  std::vector<cell> cells;

  for (const auto& grp : root.children) {
    if (grp.type != "cell") {
      report.warnings.push_back("skipping unsupported group \"" + grp.type + "\"");
      continue;
    }
    const std::string cell_name = grp.args.empty() ? "<unnamed>" : grp.args.front();
    auto skip = [&](const std::string& reason) {
      report.skipped.push_back({cell_name, reason});
    };

    bool sequential = false;
    for (const auto& child : grp.children) {
      if (child.type == "ff" || child.type == "latch" || child.type == "statetable") {
        sequential = true;
      }
    }
    if (sequential) {
      skip("sequential cell");
      continue;
    }

    const detail::liberty_group* output_pin = nullptr;
    std::vector<const detail::liberty_group*> input_pins;
    bool tristate = false;
    bool bad_direction = false;
    int output_count = 0;
    for (const auto& child : grp.children) {
      if (child.type != "pin") {
        continue;
      }
      const auto* dir = child.attr("direction");
      if (!dir) {
        bad_direction = true;
        continue;
      }
      if (dir->values.front() == "input") {
        input_pins.push_back(&child);
      } else if (dir->values.front() == "output") {
        ++output_count;
        output_pin = &child;
        if (child.attr("three_state")) {
          tristate = true;
        }
      } else {
        bad_direction = true;
      }
    }
    if (bad_direction) {
      skip("unsupported pin direction");
      continue;
    }
    if (output_count == 0) {
      skip("no output pin");
      continue;
    }
    if (output_count > 1) {
      skip("multiple output pins");
      continue;
    }
    if (tristate) {
      skip("tristate output");
      continue;
    }
    if (input_pins.empty()) {
      skip("no input pins");
      continue;
    }
    if (input_pins.size() > max_cut_size) {
      skip("more than " + std::to_string(max_cut_size) + " inputs");
      continue;
    }
    const auto* function_attr = output_pin->attr("function");
    if (!function_attr) {
      skip("no function");
      continue;
    }
    const auto* area_attr = grp.attr("area");
    if (!area_attr) {
      skip("no area");
      continue;
    }

    cell c;
    c.name = cell_name;
    c.num_inputs = static_cast<std::uint8_t>(input_pins.size());
    try {
      c.area = std::stod(area_attr->values.front());
    } catch (const std::exception&) {
      throw syntax_error("bad area value", area_attr->line);
    }
    for (const auto* pin : input_pins) {
      c.pins.push_back(pin->args.empty() ? "" : pin->args.front());
      double cap = 0.0;
      if (const auto* cap_attr = pin->attr("capacitance")) {
        cap = detail::parse_number_list(cap_attr->values.front(), cap_attr->line).front();
      } else {
        report.warnings.push_back("cell \"" + cell_name + "\" pin \"" + c.pins.back() +
                                  "\": no capacitance, using 0");
      }
      c.input_caps.push_back(cap);
    }

    try {
      c.function = compile_function(function_attr->values.front(), c.pins);
    } catch (const function_parse_error&) {
      skip("unparsable function");
      continue;
    }
    {
      bool vacuous = false;
      for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
        if (!tt_depends_on(c.function, c.num_inputs, i)) {
          vacuous = true;
        }
      }
      if (vacuous) {
        skip("function ignores an input pin");
        continue;
      }
    }

    // one timing arc per input pin, reduced to intrinsic + slope * load
    c.intrinsic.assign(c.num_inputs, 0.0);
    c.slope.assign(c.num_inputs, 0.0);
    std::vector<bool> have_arc(c.num_inputs, false);
    for (const auto& timing : output_pin->children) {
      if (timing.type != "timing") {
        continue;
      }
      const auto* related = timing.attr("related_pin");
      if (!related) {
        continue;
      }
      int pin_index = -1;
      for (std::size_t i = 0; i < c.pins.size(); ++i) {
        if (c.pins[i] == related->values.front()) {
          pin_index = static_cast<int>(i);
        }
      }
      if (pin_index < 0) {
        report.warnings.push_back("cell \"" + cell_name + "\": timing arc for unknown pin \"" +
                                  related->values.front() + "\"");
        continue;
      }
      if (have_arc[pin_index]) {
        report.warnings.push_back("cell \"" + cell_name + "\": duplicate timing arc for pin \"" +
                                  c.pins[pin_index] + "\", keeping the first");
        continue;
      }
      const detail::liberty_group* rise = nullptr;
      const detail::liberty_group* fall = nullptr;
      for (const auto& tbl : timing.children) {
        if (tbl.type == "cell_rise" && !rise) {
          rise = &tbl;
        } else if (tbl.type == "cell_fall" && !fall) {
          fall = &tbl;
        }
      }
      if (!rise && !fall) {
        continue;
      }
      detail::liberty_table merged;
      if (rise && fall) {
        const auto tr = detail::read_table(*rise);
        const auto tf = detail::read_table(*fall);
        if (tr.index_1 != tf.index_1) {
          throw syntax_error("cell \"" + cell_name + "\": rise and fall load axes differ",
                             timing.line);
        }
        merged.index_1 = tr.index_1;
        merged.values.resize(tr.values.size());
        for (std::size_t k = 0; k < tr.values.size(); ++k) {
          merged.values[k] = 0.5 * (tr.values[k] + tf.values[k]);
        }
      } else {
        merged = detail::read_table(rise ? *rise : *fall);
      }
      const auto [intrinsic, slope] = detail::fit_linear(merged.index_1, merged.values);
      c.intrinsic[pin_index] = intrinsic;
      c.slope[pin_index] = slope;
      have_arc[pin_index] = true;
    }
    for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
      if (!have_arc[i]) {
        report.warnings.push_back("cell \"" + cell_name + "\" pin \"" + c.pins[i] +
                                  "\": no timing arc, using zero delay");
      }
    }

    report.kept.push_back(cell_name);
    cells.push_back(std::move(c));
  }

  if (cells.empty()) {
    throw empty_library("no usable cell survived the import");
  }
  const std::string lib_name = root.args.empty() ? "liberty" : root.args.front();
  return {cell_library(lib_name, std::move(cells)), std::move(report)};
}

} // namespace celltune
