#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "equideg/bifurcation.hpp"
#include "equideg/error.hpp"
#include "equideg/model_io.hpp"
#include "fixtures.hpp"

using namespace equideg;

namespace {

const Model& model() {
  static const Model m = load_model(EQUIDEG_DATA "/six_membranes.json");
  return m;
}

const BifurcationProblem& problem() { return *model().problem; }

std::string key(const Triple& t) {
  return std::to_string(t.n) + "," + std::to_string(t.m) + "," + std::to_string(t.j);
}

std::shared_ptr<const DegreeCache> s4_degrees() {
  static const auto d = std::make_shared<const DegreeCache>(s4_ambient());
  return d;
}

// One curve on block j = 2 of the S4 example crossing the m = 3 row of a
// synthetic spectrum at every entry of `crossings`.
BifurcationProblem synthetic(std::vector<double> crossings) {
  while (crossings.size() < 4) crossings.push_back(60 + static_cast<double>(crossings.size()));
  auto table = BesselZeroTable::from_entries(
      {{0.2, 20, 21, 22}, {0.3, 30, 31, 32}, {0.4, 40, 41, 42}, crossings});
  return BifurcationProblem(s4_degrees(), {{2, 0.5, 6.5, ZetaProfile::sigmoid()}},
                            std::move(table), {1, 0, 1, 1, 0}, true);
}

}  // namespace

TEST_CASE("relative-mode invariants match the listed expansions") {
  BurnsideElement sum;
  std::vector<LocalInvariant> all;
  for (const auto& cp : problem().relevant_points()) {
    const auto inv = problem().local_invariant(cp, InvariantMode::Relative);
    CAPTURE(key(cp.id));
    CHECK(fixtures::listing(inv.value) == fixtures::terms("omega " + key(cp.id)));
    CHECK(inv.alpha_minus < cp.alpha);
    CHECK(inv.alpha_plus > cp.alpha);
    all.push_back(inv);
  }
  CHECK(all.size() == 5);
  const auto total = rabinowitz_sum(all);
  CHECK(!total.is_zero());
  CHECK(fixtures::listing(total) == fixtures::terms("sum"));

  const auto first = problem().local_invariant(problem().point({1, 3, 2}), InvariantMode::Relative);
  CHECK(first.value ==
        BurnsideElement::unit(*model().ambient) - model().degrees->basic_degree({3, 2}).value);
}

TEST_CASE("rabinowitz sums") {
  const auto inv = problem().local_invariant(problem().point({2, 1, 3}), InvariantMode::Relative);
  CHECK(rabinowitz_sum({inv}) == inv.value);
  auto neg = inv;
  neg.value = -inv.value;
  CHECK(rabinowitz_sum({inv, neg}).is_zero());
  CHECK(rabinowitz_sum({}).is_zero());
}

TEST_CASE("mode consistency: full = background * relative") {
  const auto background = problem().rho(problem().background());
  CHECK(problem().background() == std::vector<Triple>{{1, 1, 0}, {1, 1, 2}, {1, 1, 3}});
  for (const auto& cp : problem().relevant_points()) {
    const auto full = problem().local_invariant(cp, InvariantMode::Full);
    const auto rel = problem().local_invariant(cp, InvariantMode::Relative);
    CHECK(full.value == background * rel.value);
  }
}

TEST_CASE("telescoping of full-mode invariants") {
  std::vector<LocalInvariant> all;
  for (const auto& cp : problem().relevant_points()) {
    all.push_back(problem().local_invariant(cp, InvariantMode::Full));
  }
  const auto left = problem().rho(problem().sigma(-40));
  const auto right = problem().rho(problem().sigma(40));
  CHECK(rabinowitz_sum(all) == left - right);
}

TEST_CASE("a regular point has a zero invariant") {
  const auto& cps = problem().critical_points();
  CriticalPoint regular;
  regular.id = {9, 9, 9};
  regular.alpha = (cps[0].alpha + cps[1].alpha) / 2;
  CHECK(problem().local_invariant(regular, InvariantMode::Full).value.is_zero());
  CHECK(problem().local_invariant(regular, InvariantMode::Relative).value.is_zero());
  CHECK(problem().branch_certificates(regular, model().maximal(), InvariantMode::Full).empty());
}

TEST_CASE("folding profiles") {
  const auto maximal = model().maximal();
  for (auto mode : {InvariantMode::Full, InvariantMode::Relative}) {
    for (const auto& cp : problem().relevant_points()) {
      const auto want = fixtures::numbers("profile " + key(cp.id));
      const auto [lo, hi] = problem().bracket(cp);
      const auto minus = problem().sigma_for(lo, mode);
      const auto plus = problem().sigma_for(hi, mode);
      for (const auto& h : maximal_types(*model().ambient, {1, cp.id.j})) {
        CAPTURE(key(cp.id));
        CAPTURE(symbol(h));
        const auto p = problem().folding_profile(cp, h, mode);
        CHECK(p.s_max == static_cast<int>(want[0]));
        if (p.indicator.at(p.s_max) != static_cast<int>(want[1])) {
          WARN_MESSAGE(false, "indicator " << p.indicator.at(p.s_max) << " vs listed "
                                           << want[1] << " (" << to_string(mode) << ")");
        }
        for (const auto& [s, i] : p.indicator) {
          // Oracle: recount triples whose degree carries (^sH).
          const auto carries = [&](const Triple& t) {
            return model().degrees->basic_degree({t.m, t.j}).value.coeff(fold(h, s)) != 0;
          };
          const int nm = static_cast<int>(std::count_if(minus.begin(), minus.end(), carries));
          const int np = static_cast<int>(std::count_if(plus.begin(), plus.end(), carries));
          CHECK(p.n_minus.at(s) == nm);
          CHECK(p.n_plus.at(s) == np);
          CHECK(i == (nm % 2 == np % 2 ? 0 : (nm % 2 == 1 ? -1 : 1)));
          if (i != 0) CHECK(s <= p.s_max);
        }
        CHECK(p.m_minus.at(p.s_max) % 2 == p.m_plus.at(p.s_max) % 2);
      }
      const auto own = maximal_types(*model().ambient, {1, cp.id.j});
      for (const auto& h : maximal) {
        if (std::find(own.begin(), own.end(), h) != own.end()) continue;
        CHECK(problem().folding_profile(cp, h, mode).s_max == 0);
      }
    }
  }
}

TEST_CASE("closed form of the leading coefficient") {
  int agree = 0, differ = 0;
  for (const auto& cp : problem().relevant_points()) {
    const auto inv = problem().local_invariant(cp, InvariantMode::Full);
    for (const auto& h : maximal_types(*model().ambient, {1, cp.id.j})) {
      const auto p = problem().folding_profile(cp, h, InvariantMode::Full);
      REQUIRE(p.s_max > 0);
      const auto check = problem().check_bounded(p, inv, p.s_max);
      CHECK(check.brute_force != 0);
      CHECK(problem().theorem_bounded_coeff(p, p.s_max + 2) == 0);
      CHECK(inv.value.coeff(fold(h, p.s_max + 2)) == 0);
      if (cyclic_kernel(fold(h, p.s_max))) {
        if (!check.agrees()) {
          ++differ;
          WARN_MESSAGE(false, key(cp.id) << " " << symbol(h) << ": closed form "
                                         << check.closed_form << ", product "
                                         << check.brute_force);
        }
      } else {
        CHECK(check.agrees());
        ++agree;
      }
    }
  }
  MESSAGE(agree << " non-cyclic pairs agree, " << differ << " cyclic-kernel pairs differ");

  const auto& cp = problem().point({1, 3, 2});
  const auto inv = problem().local_invariant(cp, InvariantMode::Full);
  for (const auto& h : maximal_types(*model().ambient, {1, 2})) {
    const auto p = problem().folding_profile(cp, h, InvariantMode::Full);
    CHECK(p.s_max == 3);
    CHECK(problem().check_bounded(p, inv, 3).closed_form > 0);
    CHECK(problem().check_bounded(p, inv, 3).brute_force > 0);
  }
  const auto p = problem().folding_profile(cp, maximal_types(*model().ambient, {1, 2})[0],
                                           InvariantMode::Full);
  try {
    problem().theorem_bounded_coeff(p, 1);
    FAIL("accepted s below s_max");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
  }
}

TEST_CASE("branch certificates") {
  const auto maximal = model().maximal();
  CHECK(maximal.size() == 9);
  for (const auto& cp : problem().relevant_points()) {
    const auto certs = problem().branch_certificates(cp, maximal, InvariantMode::Full);
    CHECK(certs.size() == maximal_types(*model().ambient, {1, cp.id.j}).size());
    for (const auto& c : certs) {
      CHECK(c.coefficient != 0);
      CHECK(c.symmetry == fold(c.h, c.s));
      CHECK(c.statement.find(symbol(c.symmetry)) != std::string::npos);
    }
  }
}

TEST_CASE("global verdicts of the six-membrane model") {
  for (const auto& h : model().maximal()) {
    const auto v = problem().global_verdict(h, InvariantMode::Full);
    CHECK(v.members.size() == 1);
    CHECK(v.conclusion == Conclusion::UnboundedBranch);
    CHECK(v.s_bar == 3);
    CHECK(v.members[0].m == 3);
    CHECK(v.alternative.find(symbol(fold(h, 3))) != std::string::npos);
    const auto rel = problem().global_verdict(h, InvariantMode::Relative);
    CHECK(rel.members == v.members);
  }
}

TEST_CASE("synthetic spectra with several members at the top folding") {
  const auto& ambient = *s4_ambient();
  for (const auto& crossings : std::vector<std::vector<double>>{{1.5, 3.0}, {1.5, 3.0, 5.5}}) {
    const auto pb = synthetic(crossings);
    const auto cps = pb.relevant_points();
    REQUIRE(cps.size() == crossings.size());
    for (const auto& h : maximal_types(ambient, {1, 2})) {
      const auto v = pb.global_verdict(h, InvariantMode::Full);
      CHECK(v.s_bar == 3);
      CHECK(v.members.size() == crossings.size());
      CHECK((v.conclusion == Conclusion::UnboundedBranch) == (crossings.size() % 2 == 1));
      for (std::size_t k = 0; k + 1 < cps.size(); ++k) {
        const auto a = pb.folding_profile(cps[k], h, InvariantMode::Full);
        const auto b = pb.folding_profile(cps[k + 1], h, InvariantMode::Full);
        CHECK(a.indicator.at(3) * b.indicator.at(3) == -1);
      }
    }
  }
}

TEST_CASE("radial crossings certify no non-radial branch") {
  auto table = BesselZeroTable::from_entries(
      {{0.2, 2.0, 21, 22}, {0.3, 30, 31, 32}, {0.4, 40, 41, 42}, {50, 60, 61, 62}});
  const BifurcationProblem pb(s4_degrees(), {{2, 0.5, 6.5, ZetaProfile::sigmoid()}},
                              std::move(table), {1, 0, 1, 1, 0}, false);
  REQUIRE(pb.relevant_points().size() == 1);
  const auto cp = pb.relevant_points()[0];
  CHECK(cp.id == Triple{2, 0, 2});
  CHECK(!pb.local_invariant(cp, InvariantMode::Full).value.is_zero());
  CHECK(pb.branch_certificates(cp, maximal_types(*s4_ambient(), {1, 2}), InvariantMode::Full)
            .empty());
}

TEST_CASE("no critical points") {
  const BifurcationProblem pb(s4_degrees(), {{2, 0.5, 0.1, ZetaProfile::sigmoid()}},
                              BesselZeroTable::covering(1), {1, 0, 1, 1, 0}, true);
  CHECK(pb.critical_points().empty());
  for (const auto& h : maximal_types(*s4_ambient(), {1, 2})) {
    const auto v = pb.global_verdict(h, InvariantMode::Full);
    CHECK(v.conclusion == Conclusion::Inconclusive);
    CHECK(v.members.empty());
    CHECK(v.s_bar == 0);
  }
}

TEST_CASE("K-fixed filter and isolation") {
  for (const auto& cp : problem().relevant_points()) CHECK(cp.id.m % 2 == 1);
  const BifurcationProblem all(model().degrees, model().curves, problem().table(),
                               problem().multiplicities(), false);
  CHECK(all.relevant_points().size() == problem().critical_points().size());

  // Two curves crossing the same zero at the same alpha.
  const BifurcationProblem twin(s4_degrees(),
                                {{2, 32, 22, ZetaProfile::sigmoid()},
                                 {3, 32, 22, ZetaProfile::sigmoid()}},
                                BesselZeroTable::covering(60), {1, 0, 1, 1, 0}, true);
  try {
    twin.bracket(twin.critical_points()[0]);
    FAIL("accepted a shared alpha");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIsolated);
  }
}
