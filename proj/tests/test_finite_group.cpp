#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "equideg/error.hpp"
#include "equideg/finite_group.hpp"
#include "equideg/orbit_types.hpp"

using namespace equideg;

namespace {

Permutation cyc(const char* text, std::size_t degree) {
  return Permutation::parse_cycles(text, degree);
}

std::shared_ptr<const FiniteGroup> s4_ptr() {
  static auto g = std::make_shared<const FiniteGroup>(s4_group());
  return g;
}

// Action of S4 on the six membranes: (1,2) -> (1,3)(2,6)(4,5), (1,2,3,4) -> (1,2,3,4).
OrthogonalAction membranes() {
  return OrthogonalAction(s4_ptr(), {permutation_matrix(cyc("(1,3)(2,6)(4,5)", 6)),
                                     permutation_matrix(cyc("(1,2,3,4)", 6))});
}

using ElementSet = std::set<std::uint32_t>;

ElementSet closure(const FiniteGroup& g, ElementSet gens) {
  ElementSet out{g.identity()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto a : ElementSet(out)) {
      for (auto b : gens) {
        if (out.insert(g.multiply(a, b)).second) grew = true;
      }
    }
  }
  return out;
}

ElementSet conjugate_set(const FiniteGroup& g, const ElementSet& h, std::uint32_t x) {
  ElementSet out;
  for (auto e : h) out.insert(g.multiply(g.multiply(x, e), g.inverse(x)));
  return out;
}

// Every subgroup generated by at most two elements, grouped into conjugacy
// classes; enough for S4, whose subgroups are all 2-generated.
std::vector<std::set<ElementSet>> two_generated_classes(const FiniteGroup& g) {
  std::set<ElementSet> all;
  for (std::uint32_t a = 0; a < g.order(); ++a) {
    for (std::uint32_t b = a; b < g.order(); ++b) all.insert(closure(g, {a, b}));
  }
  std::vector<std::set<ElementSet>> classes;
  std::set<ElementSet> seen;
  for (const auto& h : all) {
    if (seen.count(h)) continue;
    std::set<ElementSet> cls;
    for (std::uint32_t x = 0; x < g.order(); ++x) cls.insert(conjugate_set(g, h, x));
    seen.insert(cls.begin(), cls.end());
    classes.push_back(cls);
  }
  return classes;
}

std::size_t brute_weyl(const FiniteGroup& g, const Subgroup& h) {
  const ElementSet hs(h.members.begin(), h.members.end());
  std::size_t n = 0;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    if (conjugate_set(g, hs, x) == hs) ++n;
  }
  return n / h.order();
}

Subgroup named(const FiniteGroup& g, std::vector<const char*> gens) {
  std::vector<std::uint32_t> idx;
  for (auto s : gens) idx.push_back(g.index_of(cyc(s, g.degree())));
  return generate_subgroup(g, idx);
}

}  // namespace

TEST_CASE("permutations parse, compose right to left and print") {
  auto a = cyc("(1,2)", 3);
  auto b = cyc("(2 3)", 3);
  CHECK((a * b)(1) == 2);
  CHECK((a * b).to_cycles() == "(1,2,3)");
  CHECK(cyc("()", 4).is_identity());
  CHECK((a * a).is_identity());
  CHECK(cyc("(1,2,3)", 3).inverse().to_cycles() == "(1,3,2)");
  CHECK_THROWS_AS(cyc("(1,1)", 3), Error);
  CHECK_THROWS_AS(cyc("(1,5)", 3), Error);
  try {
    cyc("(1,2,1)", 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPermutationInput);
  }
}

TEST_CASE("group orders and element classes") {
  const auto& s4 = *s4_ptr();
  CHECK(s4.order() == 24);
  CHECK(s4.conjugacy_classes().size() == 5);
  CHECK(s4.exponent() == 12);

  auto trivial = FiniteGroup::from_generators(3, {});
  CHECK(trivial.order() == 1);
  CHECK(trivial.conjugacy_classes().size() == 1);

  auto z2 = FiniteGroup::from_generators(2, {cyc("(1,2)", 2)});
  CHECK(z2.order() == 2);
  CHECK(z2.conjugacy_classes().size() == 2);

  auto s4z2 = direct_product(s4, z2);
  CHECK(s4z2.order() == 48);
  CHECK(s4z2.degree() == 6);
  CHECK(s4z2.conjugacy_classes().size() == 10);
}

TEST_CASE("closure cap") {
  try {
    FiniteGroup::from_generators(5, {cyc("(1,2)", 5), cyc("(1,2,3,4,5)", 5)}, 50);
    FAIL("cap not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClosureCapExceeded);
  }
}

TEST_CASE("subgroup classes of S4 against a brute-force enumeration") {
  const auto& s4 = *s4_ptr();
  const auto classes = subgroup_classes(s4);
  const auto oracle = two_generated_classes(s4);
  REQUIRE(classes.size() == 11);
  REQUIRE(oracle.size() == 11);

  std::multiset<std::pair<std::size_t, std::size_t>> got, want;
  std::size_t total = 0;
  for (const auto& c : classes) {
    got.insert({c.representative.order(), c.class_size});
    total += c.class_size;
  }
  for (const auto& c : oracle) want.insert({c.begin()->size(), c.size()});
  CHECK(got == want);
  CHECK(total == 30);

  for (const auto& c : classes) {
    const ElementSet rep(c.representative.members.begin(), c.representative.members.end());
    bool found = false;
    for (const auto& oc : oracle) found = found || oc.count(rep) > 0;
    CHECK(found);
  }
}

TEST_CASE("S4 x Z2 has 33 subgroup classes, all named") {
  auto ambient = s4_ambient();
  const auto& classes = ambient->subgroup_classes();
  CHECK(classes.size() == 33);
  std::set<std::string> names;
  for (const auto& c : classes) {
    CHECK(!c.name.empty());
    names.insert(c.name);
  }
  CHECK(names.size() == 33);
  CHECK(names.count("D4z"));
  CHECK(names.count("D4z_2"));
  CHECK(names.count("S4p"));
  CHECK(ambient->class_by_name("V4").has_value());
}

TEST_CASE("Weyl orders") {
  const auto& s4 = *s4_ptr();
  CHECK(weyl_order(s4, named(s4, {"(1,2,3)", "(1,2)(3,4)"})) == 2);  // A4
  CHECK(weyl_order(s4, trivial_subgroup(s4)) == 24);
  CHECK(weyl_order(s4, whole_group(s4)) == 1);
  CHECK(weyl_order(s4, named(s4, {"(1,2)(3,4)", "(1,3)(2,4)"})) == 6);  // V4
  for (const auto& c : subgroup_classes(s4)) {
    CHECK(weyl_order(s4, c.representative) == brute_weyl(s4, c.representative));
    CHECK(normalizer(s4, c.representative).order() * c.class_size == 24);
  }
}

TEST_CASE("n(H, K) counts conjugates of K containing H") {
  const auto& s4 = *s4_ptr();
  const auto classes = subgroup_classes(s4);
  const auto oracle = two_generated_classes(s4);
  for (const auto& h : classes) {
    const ElementSet hs(h.representative.members.begin(), h.representative.members.end());
    for (const auto& k : classes) {
      const ElementSet ks(k.representative.members.begin(), k.representative.members.end());
      std::size_t want = 0;
      for (const auto& oc : oracle) {
        if (!oc.count(ks)) continue;
        for (const auto& member : oc) {
          if (std::includes(member.begin(), member.end(), hs.begin(), hs.end())) ++want;
        }
      }
      CHECK(n_count(s4, h.representative, k) == want);
    }
  }
  auto d1 = named(s4, {"(1,2)"});
  auto d4 = classes[class_index(s4, classes, named(s4, {"(1,2,3,4)", "(1,3)"}))];
  CHECK(n_count(s4, d1, d4) == 1);
  auto a4 = classes[class_index(s4, classes, named(s4, {"(1,2,3)", "(1,2)(3,4)"}))];
  CHECK(n_count(s4, d1, a4) == 0);
}

TEST_CASE("make_subgroup rejects non-subgroups") {
  const auto& s4 = *s4_ptr();
  try {
    make_subgroup(s4, {s4.identity(), s4.index_of(cyc("(1,2,3)", 4))});
    FAIL("accepted a non-subgroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotASubgroup);
  }
}

TEST_CASE("six-membrane action decomposes as chi0 + chi2 + chi3") {
  const auto action = membranes();
  const auto table = s4_character_table(*s4_ptr());
  const auto iso = isotypic_decompose(action, table);
  REQUIRE(iso.size() == 5);
  std::vector<std::int64_t> mult;
  for (const auto& m : iso) mult.push_back(m.multiplicity);
  CHECK(mult == std::vector<std::int64_t>{1, 0, 1, 1, 0});

  // Oracle: <chi_i, chi_V> with chi_V(g) = number of fixed points.
  const auto& g = *s4_ptr();
  for (std::size_t i = 0; i < 5; ++i) {
    Rational sum = 0;
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      sum += table.value(i, x) * static_cast<std::int64_t>(std::lround(action.trace(x)));
    }
    CHECK(sum / Rational(24) == Rational(mult[i]));
  }
}

TEST_CASE("the homomorphism check rejects inconsistent generator images") {
  // (1,2) -> (1,4)(2,3)(5,6) with (1,2,3,4) -> (1,2,3,4) is not a homomorphism:
  // the image of (1,2)(1,2,3,4) has order 2 instead of 3.
  try {
    OrthogonalAction(s4_ptr(), {permutation_matrix(cyc("(1,4)(2,3)(5,6)", 6)),
                                permutation_matrix(cyc("(1,2,3,4)", 6))});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EquivarianceViolation);
  }
}

TEST_CASE("fixed-point dimensions") {
  const auto action = membranes();
  const auto& g = *s4_ptr();
  CHECK(fixed_dim(action, trivial_subgroup(g)) == 6);
  CHECK(fixed_dim(action, whole_group(g)) == 1);
  CHECK(fixed_dim(action, named(g, {"(1,2,3,4)"})) == 3);  // orbits {1,2,3,4}, {5}, {6}
}

TEST_CASE("property: Lagrange, fixed dims monotone, dimension count") {
  const auto& g = *s4_ptr();
  const auto action = membranes();
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(g.order() - 1));
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t a = pick(rng), b = pick(rng);
    const auto h = generate_subgroup(g, std::vector<std::uint32_t>{a});
    const auto k = generate_subgroup(g, std::vector<std::uint32_t>{a, b});
    CHECK(g.order() % h.order() == 0);
    CHECK(k.order() % h.order() == 0);
    CHECK(is_subgroup_of(h, k));
    CHECK(fixed_dim(action, k) <= fixed_dim(action, h));
    CHECK(are_conjugate(g, h, conjugate(g, h, b)));
  }
  const auto table = s4_character_table(g);
  std::int64_t dim = 0;
  for (const auto& m : isotypic_decompose(action, table)) dim += m.multiplicity * table.degree(m.irrep);
  CHECK(dim == 6);
}

TEST_CASE("character table validation") {
  const auto& g = *s4_ptr();
  auto table = s4_character_table(g);
  CHECK(table.size() == 5);
  CHECK(table.degree(3) == 3);
  auto rows = table.characters;
  rows[4][1] = Rational(-1);
  CHECK_THROWS_AS(make_character_table(g, {"()", "(1,2)", "(1,2)(3,4)", "(1,2,3)", "(1,2,3,4)"},
                                       table.labels, rows),
                  Error);
}
