#include <catch2/catch_amalgamated.hpp>

#include <celltune/rng.hpp>
#include <celltune/truth_table.hpp>

using namespace celltune;

TEST_CASE("variable tables") {
  REQUIRE(tt_var(0, 1) == 0b10);
  REQUIRE(tt_var(0, 2) == 0b1010);
  REQUIRE(tt_var(1, 2) == 0b1100);
  REQUIRE(tt_var(2, 3) == 0b11110000);
}

TEST_CASE("permutation feeds variable i from position perm[i]") {
  // t = x0 & !x1, true only for pattern 01
  const truth_table t = 0b0010;
  const truth_table swapped = tt_permute(t, 2, {1, 0});
  // now variable roles trade places: true only for pattern 10
  REQUIRE(swapped == 0b0100);
  // symmetric functions are permutation-invariant
  REQUIRE(tt_permute(0b1000, 2, {1, 0}) == 0b1000);
  REQUIRE(tt_permute(0b0110, 2, {1, 0}) == 0b0110);
}

TEST_CASE("identity permutation is a no-op") {
  rng r(5);
  for (int i = 0; i < 50; ++i) {
    const auto t = static_cast<truth_table>(r.next_u64());
    REQUIRE(tt_permute(t, 4, {0, 1, 2, 3}) == t);
  }
}

TEST_CASE("permuting then inverse-permuting returns the original") {
  rng r(6);
  const tt_perm perms3[] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& perm : perms3) {
    tt_perm inv{};
    for (unsigned i = 0; i < 3; ++i) {
      inv[perm[i]] = static_cast<std::uint8_t>(i);
    }
    for (int i = 0; i < 30; ++i) {
      const auto t = static_cast<truth_table>(r.next_u64() & 0xff);
      REQUIRE(tt_permute(tt_permute(t, 3, perm), 3, inv) == t);
    }
  }
}

TEST_CASE("canonical form is invariant under input permutation") {
  rng r(7);
  const tt_perm perms3[] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < 100; ++i) {
    const auto t = static_cast<truth_table>(r.next_u64() & 0xff);
    const auto [canon, perm] = tt_canonicalize(t, 3);
    REQUIRE(tt_permute(t, 3, perm) == canon);
    REQUIRE(canon <= tt_permute(t, 3, perms3[0]));
    for (const auto& p : perms3) {
      const auto [canon2, perm2] = tt_canonicalize(tt_permute(t, 3, p), 3);
      (void)perm2;
      REQUIRE(canon2 == canon);
    }
  }
}

TEST_CASE("support detection") {
  REQUIRE(tt_depends_on(0b0110, 2, 0));
  REQUIRE(tt_depends_on(0b0110, 2, 1));
  const truth_table just_x0 = tt_var(0, 2);
  REQUIRE(tt_depends_on(just_x0, 2, 0));
  REQUIRE_FALSE(tt_depends_on(just_x0, 2, 1));
  REQUIRE(tt_support_mask(just_x0, 2) == 0b01);
  REQUIRE(tt_support_mask(0, 3) == 0);
  REQUIRE(tt_support_mask(0b10000001, 3) == 0b111);
}

TEST_CASE("support reduction drops vacuous variables") {
  // x1 over three variables reduces to the identity of one variable
  const auto r = tt_reduce_support(tt_var(1, 3), 3);
  REQUIRE(r.num_vars == 1);
  REQUIRE(r.table == tt_identity);
  REQUIRE(r.kept[0] == 1);

  // x0 & x2 over three variables keeps positions 0 and 2
  const truth_table t = tt_var(0, 3) & tt_var(2, 3);
  const auto r2 = tt_reduce_support(t, 3);
  REQUIRE(r2.num_vars == 2);
  REQUIRE(r2.table == 0b1000);
  REQUIRE(r2.kept[0] == 0);
  REQUIRE(r2.kept[1] == 2);

  // constants reduce to zero variables
  const auto r3 = tt_reduce_support(0, 4);
  REQUIRE(r3.num_vars == 0);
  REQUIRE(r3.table == 0);
  const auto r4 = tt_reduce_support(tt_mask(4), 4);
  REQUIRE(r4.num_vars == 0);
  REQUIRE(r4.table == 1);
}

TEST_CASE("reduction preserves the function") {
  rng rr(8);
  for (int i = 0; i < 200; ++i) {
    const auto t = static_cast<truth_table>(rr.next_u64());
    const auto red = tt_reduce_support(t, 4);
    for (unsigned p = 0; p < 16; ++p) {
      unsigned q = 0;
      for (unsigned k = 0; k < red.num_vars; ++k) {
        q |= ((p >> red.kept[k]) & 1u) << k;
      }
      bool expect = tt_bit(t, p);
      if (red.num_vars == 0) {
        REQUIRE(tt_bit(t, 0) == expect);
        REQUIRE((red.table & 1u) == (expect ? 1u : 0u));
      } else {
        REQUIRE(tt_bit(red.table, q) == expect);
      }
    }
  }
}
