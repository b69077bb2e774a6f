#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "equideg/degrees.hpp"
#include "equideg/error.hpp"
#include "fixtures.hpp"

using namespace equideg;

namespace {

const AmbientGroup& ambient() { return *s4_ambient(); }

const DegreeCache& degrees() {
  static const DegreeCache cache(s4_ambient());
  return cache;
}

BurnsideElement deg(int m, std::size_t j) { return degrees().basic_degree({m, j}).value; }

const std::vector<std::int64_t> kMultiplicities{1, 0, 1, 1, 0};

}  // namespace

TEST_CASE("basic degrees match the listed expansions") {
  for (int m : {1, 3}) {
    for (std::size_t j : {0, 2, 3}) {
      const auto key = "degree " + std::to_string(m) + "," + std::to_string(j);
      CAPTURE(key);
      CHECK(fixtures::listing(deg(m, j)) == fixtures::terms(key));
    }
  }
  std::vector<std::int64_t> coefs;
  for (const auto& [s, c] : to_listing_basis(deg(1, 2)).serialize()) coefs.push_back(c);
  std::sort(coefs.begin(), coefs.end());
  CHECK(coefs == std::vector<std::int64_t>{-2, -1, -1, 1, 1, 4});
  CHECK(deg(1, 0).size() == 2);
}

TEST_CASE("folding identity against the direct computation") {
  for (std::size_t j : {0, 2, 3}) {
    CHECK(basic_degree_direct(ambient(), {1, j}) == deg(1, j));
    for (int s : {2, 3}) {
      CAPTURE(s);
      CAPTURE(j);
      CHECK(fold(deg(1, j), s) == deg(s, j));
      CHECK(basic_degree_direct(ambient(), {s, j}) == deg(s, j));
    }
  }
}

TEST_CASE("m = 0 degrees") {
  const auto one = BurnsideElement::unit(ambient());
  for (std::size_t j : {0, 2, 3}) {
    const auto d = deg(0, j);
    CHECK(d * d == one);
    CHECK(d.coeff(ambient().unit()) == 1);
    for (const auto& [h, c] : d.terms()) CHECK(h.is_o2());
  }
  // V_{0,0} is a line on which only the antipode acts: -id has Brouwer degree -1
  // on it and the only isotropy below (G) is O(2) x S4.
  CHECK(deg(0, 0).size() == 2);
}

TEST_CASE("property: every listed term has a nonzero fixed space") {
  for (int m : {1, 2, 3}) {
    for (std::size_t j : {0, 2, 3}) {
      const auto d = deg(m, j);
      for (const auto& [h, c] : d.terms()) {
        if (h == ambient().unit()) continue;
        CHECK(fixed_dim(h, {m, j}) > 0);
      }
    }
  }
}

TEST_CASE("degree of the linearization") {
  const auto one = BurnsideElement::unit(ambient());
  CHECK(degrees().degree_of_linearization({}, kMultiplicities) == one);
  CHECK(degrees().degree_of_linearization({{1, 3, 2}}, kMultiplicities) == deg(3, 2));
  CHECK(degrees().degree_of_linearization({{1, 3, 2}, {1, 3, 3}}, kMultiplicities) ==
        deg(3, 2) * deg(3, 3));
  // Even multiplicity: the factor squares away.
  CHECK(degrees().degree_of_linearization({{1, 3, 2}}, {1, 0, 2, 1, 0}) == one);
  CHECK(degrees().degree_of_linearization({{1, 3, 1}}, kMultiplicities) == one);
  // A repeated triple cancels.
  CHECK(degrees().degree_of_linearization({{1, 3, 2}, {2, 3, 2}}, kMultiplicities) == one);
}

TEST_CASE("x0 requires a Weyl group of order 1 or 2") {
  for (const auto& h : maximal_types(ambient(), {1, 3})) CHECK(x0(h) * weyl_order(h) == 2);
  bool thrown = false;
  for (const auto& h : orbit_types(ambient(), {1, 3})) {
    if (weyl_order(h) <= 2) continue;
    try {
      x0(h);
    } catch (const Error& e) {
      thrown = e.code() == ErrorCode::InfiniteWeyl;
    }
    break;
  }
  CHECK(thrown);
}

TEST_CASE("closed-form coefficient of products of folded degrees") {
  for (std::size_t j : {0, 2, 3}) {
    for (const auto& h : maximal_types(ambient(), {1, j})) {
      const auto single = coeff_fast_formula(h, {j});
      CHECK(single == -x0(h));  // dim V^H is odd for a maximal type
      CHECK(coeff_fast_formula(h, {j, j}) == 0);
      CHECK(coeff_fast_formula(h, {}) == 0);
    }
  }
  // Brute-force product versus closed form on every maximal type, over
  // products of degrees of blocks in which it is maximal.
  for (std::size_t j : {0, 2, 3}) {
    const std::vector<std::vector<std::size_t>> sets{{}, {j}, {j, j}, {j, j, j}};
    for (const auto& h : maximal_types(ambient(), {1, j})) {
      for (int s : {1, 2, 3}) {
        for (const auto& js : sets) {
          auto product = BurnsideElement::unit(ambient());
          for (auto k : js) product = product * deg(s, k);
          const auto value = coeff_fast(degrees(), h, s, js);
          CHECK(value == product.coeff(fold(h, s)));
          CHECK(value == coeff_fast_formula(h, js));
        }
      }
    }
  }
}
