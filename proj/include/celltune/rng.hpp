/*!
  \file rng.hpp
  \brief Seeded random source with portable uniform draws
*/

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace celltune {

/*! \brief Wraps std::mt19937_64 behind library-defined uniform mappings.
 *
 * The standard distributions are implementation-defined, so every draw here
 * is mapped from raw engine output by hand. A given seed therefore yields
 * the same sequence on every platform and standard library.
 */
class rng {
public:
  explicit rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /*! \brief Uniform integer in [0, bound). Rejection sampling, unbiased. */
  std::uint64_t below(std::uint64_t bound) {
    // 2^64 mod bound; accepting draws >= threshold leaves a span that is an
    // exact multiple of bound
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = eng_();
      if (x >= threshold) {
        return x % bound;
      }
    }
  }

  /*! \brief Uniform double in [0, 1) with 53 random bits. */
  double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /*! \brief Uniform integer in [lo, hi], both inclusive. */
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  std::string state_string() const {
    std::ostringstream os;
    os << eng_;
    return os.str();
  }

  void restore_state(const std::string& s) {
    std::istringstream is(s);
    is >> eng_;
  }

private:
  std::mt19937_64 eng_;
};

} // namespace celltune
