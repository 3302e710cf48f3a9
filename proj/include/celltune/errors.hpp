/*!
  \file errors.hpp
  \brief Exception types thrown across the library
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace celltune {

/*! \brief Base class of all celltune exceptions. */
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Parse failure carrying a 1-based source line. */
class parse_error : public error {
public:
  parse_error(const std::string& what, std::size_t line)
      : error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class syntax_error : public parse_error {
public:
  using parse_error::parse_error;
};

class unsupported_directive : public parse_error {
public:
  using parse_error::parse_error;
};

class undefined_signal : public parse_error {
public:
  using parse_error::parse_error;
};

/*! \brief AIGER header counts disagree with the body. */
class header_mismatch : public parse_error {
public:
  using parse_error::parse_error;
};

class schema_error : public error {
public:
  using error::error;
};

class function_parse_error : public error {
public:
  using error::error;
};

/*! \brief A declared cell pin the function does not depend on. */
class vacuous_pin_error : public error {
public:
  using error::error;
};

class too_many_inputs : public error {
public:
  using error::error;
};

class length_mismatch : public error {
public:
  using error::error;
};

class empty_selection : public error {
public:
  using error::error;
};

class empty_library : public error {
public:
  using error::error;
};

/*! \brief A node or output polarity the selected cells cannot realize. */
class mapping_failure : public error {
public:
  mapping_failure(const std::string& what, std::uint32_t var, bool polarity_only)
      : error(what), var_(var), polarity_only_(polarity_only) {}

  //! AIG variable that could not be covered.
  std::uint32_t var() const { return var_; }
  //! True when the logic was coverable but an inversion was not.
  bool polarity_only() const { return polarity_only_; }

private:
  std::uint32_t var_;
  bool polarity_only_;
};

class dangling_net : public error {
public:
  using error::error;
};

class cycle_detected : public error {
public:
  using error::error;
};

class size_exceeds_arms : public error {
public:
  using error::error;
};

class shape_mismatch : public error {
public:
  using error::error;
};

class non_finite_gradient : public error {
public:
  using error::error;
};

class config_error : public error {
public:
  using error::error;
};

class io_error : public error {
public:
  using error::error;
};

} // namespace celltune
