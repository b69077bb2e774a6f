// Acceptance run for the six-membrane example: one line per criterion.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "equideg/error.hpp"
#include "equideg/model_io.hpp"
#include "fixtures.hpp"

using namespace equideg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Model& model() {
  static const Model m = load_model(EQUIDEG_DATA "/six_membranes.json");
  return m;
}

const BifurcationProblem& problem() { return *model().problem; }
const AmbientGroup& ambient() { return *model().ambient; }

std::string key(const Triple& t) {
  return std::to_string(t.n) + "," + std::to_string(t.m) + "," + std::to_string(t.j);
}

std::vector<std::string> symbols(const std::vector<OrbitType>& types) {
  std::vector<std::string> out;
  for (const auto& h : types) out.push_back(fixtures::canonical(symbol(h)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted_block(const std::string& k) {
  auto out = fixtures::block(k);
  std::sort(out.begin(), out.end());
  return out;
}

Outcome bessel_table() {
  const auto t0 = Clock::now();
  const auto table = BesselZeroTable::build(10, 9);
  const double elapsed = seconds_since(t0);
  int beyond = 0, beyond_print = 0;
  double worst = 0;
  for (int m = 0; m <= 10; ++m) {
    const auto want = fixtures::tokens("bessel m" + std::to_string(m));
    for (int n = 1; n <= 9; ++n) {
      const auto& lit = want.at(n - 1);
      const double diff = std::fabs(table.s(m, n) - std::stod(lit));
      worst = std::max(worst, diff);
      if (diff > 1e-3) ++beyond;
      if (diff > std::max(1e-3, fixtures::print_tolerance(lit))) ++beyond_print;
    }
  }
  std::ostringstream d;
  d << (99 - beyond) << "/99 within 1e-3 (max diff " << worst << "); " << (99 - beyond_print)
    << "/99 within the printed precision; " << elapsed << " s";
  return {beyond == 0 && elapsed < 2.0, d.str()};
}

Outcome isotypic() {
  std::ostringstream d;
  d << "(";
  for (std::size_t i = 0; i < model().multiplicities.size(); ++i) {
    d << (i ? "," : "") << model().multiplicities[i];
  }
  d << ")";
  return {model().multiplicities == std::vector<std::int64_t>{1, 0, 1, 1, 0}, d.str()};
}

Outcome maximal() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t j : {0, 2, 3}) {
    const auto one = maximal_types(ambient(), {1, j});
    std::vector<OrbitType> folded;
    for (const auto& h : one) folded.push_back(fold(h, 3));
    const bool match = symbols(one) == sorted_block("maximal 1," + std::to_string(j)) &&
                       symbols(folded) == sorted_block("maximal 3," + std::to_string(j));
    ok = ok && match;
    d << "|M_1," << j << "|=" << one.size() << (match ? "" : " (symbol mismatch)") << " ";
  }
  ok = ok && maximal_types(ambient(), {1, 0}).size() == 1 &&
       maximal_types(ambient(), {1, 2}).size() == 3 &&
       maximal_types(ambient(), {1, 3}).size() == 5;
  return {ok, d.str() + "folds by 3 checked"};
}

Outcome basic_degrees() {
  const auto one = BurnsideElement::unit(ambient());
  int matched = 0, involutions = 0, folds = 0;
  for (std::size_t j : {0, 2, 3}) {
    for (int m : {1, 3}) {
      const auto d = model().degrees->basic_degree({m, j}).value;
      matched += fixtures::listing(d) ==
                 fixtures::terms("degree " + std::to_string(m) + "," + std::to_string(j));
      involutions += d * d == one;
    }
    folds += fold(model().degrees->basic_degree({1, j}).value, 3) ==
             model().degrees->basic_degree({3, j}).value;
  }
  std::ostringstream d;
  d << matched << "/6 expansions, " << involutions << "/6 involutions, " << folds
    << "/3 folds";
  return {matched == 6 && involutions == 6 && folds == 3, d.str()};
}

Outcome critical_set() {
  const auto& cps = problem().critical_points();
  const std::vector<Triple> want{{1, 3, 2}, {1, 3, 3}, {1, 3, 0}, {2, 1, 2}, {2, 1, 3}};
  bool ok = cps.size() == want.size();
  double worst = 0;
  for (std::size_t i = 0; ok && i < cps.size(); ++i) {
    ok = cps[i].id == want[i] && (i == 0 || cps[i - 1].alpha < cps[i].alpha);
    double weight = 0;
    for (const auto& b : model().spectrum) {
      if (b.j == want[i].j) weight = b.weight;
    }
    const double level = (bessel_zero_sq(want[i].m, want[i].n) - 32) / weight;
    worst = std::max(worst, std::fabs(cps[i].zeta_level - level));
  }
  std::ostringstream d;
  d << cps.size() << " points, max zeta-level error " << worst;
  return {ok && worst <= 1e-9, d.str()};
}

Outcome local_invariants() {
  std::vector<LocalInvariant> all;
  int matched = 0;
  bool minus_four = false;
  for (const auto& cp : problem().relevant_points()) {
    const auto inv = problem().local_invariant(cp, InvariantMode::Relative);
    matched += fixtures::listing(inv.value) == fixtures::terms("omega " + key(cp.id));
    if (cp.id == Triple{1, 3, 2}) {
      for (const auto& [s, c] : fixtures::listing(inv.value)) {
        minus_four = minus_four || (s == "(D6^Z3 x^V4 D4p)" && c == -4);
      }
    }
    all.push_back(inv);
  }
  const auto sum = rabinowitz_sum(all);
  const bool sum_ok = !sum.is_zero() && fixtures::listing(sum) == fixtures::terms("sum");
  std::ostringstream d;
  d << matched << "/5 omega expansions, Rabinowitz sum " << (sum_ok ? "matches" : "differs");
  return {matched == 5 && minus_four && sum_ok && all.size() == 5, d.str()};
}

Outcome folding_profiles() {
  int s_ok = 0, i_ok = 0, total = 0, rel_i_ok = 0;
  std::ostringstream signs;
  const std::vector<Triple> order{{1, 3, 0}, {1, 3, 2}, {1, 3, 3}, {2, 1, 2}, {2, 1, 3}};
  for (const auto& id : order) {
    const auto& cp = problem().point(id);
    const auto want = fixtures::numbers("profile " + key(id));
    bool s_all = true, i_all = true, rel_all = true;
    int sign = 0;
    for (const auto& h : maximal_types(ambient(), {1, id.j})) {
      const auto p = problem().folding_profile(cp, h, InvariantMode::Full);
      const auto r = problem().folding_profile(cp, h, InvariantMode::Relative);
      s_all = s_all && p.s_max == static_cast<int>(want[0]);
      sign = p.indicator.at(p.s_max);
      i_all = i_all && sign == static_cast<int>(want[1]);
      rel_all = rel_all && r.indicator.at(r.s_max) == static_cast<int>(want[1]);
    }
    ++total;
    s_ok += s_all;
    i_ok += i_all;
    rel_i_ok += rel_all;
    signs << (signs.tellp() ? "," : "") << (sign > 0 ? "+" : "-");
  }
  std::ostringstream d;
  d << "s_max " << s_ok << "/" << total << "; i-signs (" << signs.str() << ") match " << i_ok
    << "/" << total << " listed (relative mode " << rel_i_ok << "/" << total << ")";
  return {s_ok == total && i_ok == total, d.str()};
}

Outcome closed_forms() {
  int bounded = 0, bounded_bad = 0, fast = 0, fast_bad = 0;
  for (const auto& cp : problem().relevant_points()) {
    const auto inv = problem().local_invariant(cp, InvariantMode::Full);
    for (const auto& h : maximal_types(ambient(), {1, cp.id.j})) {
      const auto p = problem().folding_profile(cp, h, InvariantMode::Full);
      ++bounded;
      if (!problem().check_bounded(p, inv, p.s_max).agrees()) ++bounded_bad;
      ++fast;
      try {
        coeff_fast(*model().degrees, h, cp.id.m, {cp.id.j});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CrossCheckMismatch) throw;
        ++fast_bad;
      }
    }
  }
  std::ostringstream d;
  d << "bounded-form mismatches " << bounded_bad << "/" << bounded
    << " (cyclic-kernel types); product-form mismatches " << fast_bad << "/" << fast;
  return {bounded_bad == 0 && fast_bad == 0, d.str()};
}

Outcome verdicts() {
  int ok = 0, total = 0;
  for (const auto& h : model().maximal()) {
    const auto v = problem().global_verdict(h, model().config.analysis.mode);
    ++total;
    ok += v.members.size() == 1 && v.conclusion == Conclusion::UnboundedBranch &&
          v.alternative.find(symbol(fold(h, v.s_bar))) != std::string::npos;
  }
  std::ostringstream d;
  d << ok << "/" << total << " maximal types with |J| = 1 and an unbounded branch";
  return {ok == total && total == 9, d.str()};
}

Outcome properties() {
  std::vector<OrbitType> pool;
  for (int m : {1, 3}) {
    for (std::size_t j : {0, 2, 3}) {
      const auto d = model().degrees->basic_degree({m, j}).value;
      for (const auto& [h, c] : d.terms()) pool.push_back(h);
    }
  }
  std::sort(pool.begin(), pool.end(), OrbitTypeLess{});
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3), size(1, 3);
  std::vector<BurnsideElement> xs(100);
  for (auto& a : xs) {
    for (int k = size(rng); k > 0; --k) a.add(pool[pick(rng)], coef(rng));
  }
  int ring_bad = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& a = xs[i];
    const auto& b = xs[(i + 1) % xs.size()];
    const auto& c = xs[(i + 2) % xs.size()];
    ring_bad += !(a * b == b * a) + !((a * b) * c == a * (b * c)) +
                !(a * (b + c) == a * b + a * c);
  }

  int stab_bad = 0, pairs = 0;
  std::vector<OrbitType> sample;
  for (const auto& h : model().maximal()) {
    sample.push_back(h);
    sample.push_back(fold(h, 3));
  }
  for (const auto& l : sample) {
    for (const auto& h : sample) {
      const auto n = truncation_level(l, h);
      ++pairs;
      stab_bad += n_truncated(l, h, n) != n_truncated(l, h, 2 * n);
    }
  }

  int watson_bad = 0;
  for (int m = 0; m <= 20; ++m) watson_bad += !(bessel_zero_sq(m, 1) > m * (m + 2));

  // Kernel mode at (1,3,2) fixed by (^3H) for H = (D2^D1 x^D4 D4p).
  const auto& cp = problem().point({1, 3, 2});
  Eigen::MatrixXd q;
  for (const auto& b : model().spectrum) {
    if (b.j == 2) q = b.basis;
  }
  OrbitType h = model().resolve("(D2^D1 x^D4 D4p)");
  const auto gammas = model().gamma_matrices();
  const Eigen::MatrixXd fixed = fixed_mode_basis(fold(h, 3), 3, q, gammas);
  const auto mode = make_mode(cp, fixed.col(0));
  double residual = 0;
  const double pi = std::numbers::pi;
  for (const auto& p : sample_grid(mode, 200)) {
    residual = std::max(residual, (mode(p.r, p.theta + 2 * pi / 3) - p.value).cwiseAbs().maxCoeff());
    residual = std::max(residual, (mode(p.r, p.theta + pi / 3) + p.value).cwiseAbs().maxCoeff());
    residual = std::max(residual, (mode(p.r, -p.theta) - p.value).cwiseAbs().maxCoeff());
  }
  Eigen::VectorXd w1(6), w2(6);
  w1 << -1, 1, -1, 1, 0, 0;
  w2 << 1, 0, 1, 0, -1, -1;
  const Eigen::MatrixXd rot = permutation_matrix(Permutation::parse_cycles("(1,2,3,4)", 6));
  int iff_bad = 0;
  for (int a1 = -4; a1 <= 4; ++a1) {
    for (int a2 = -8; a2 <= 8; ++a2) {
      const Eigen::VectorXd a = a1 * w1 + a2 * w2;
      iff_bad += (rot * a == a) != (a2 == 2 * a1);
    }
  }

  const auto t0 = Clock::now();
  run_report(load_model(EQUIDEG_DATA "/six_membranes.json"));
  const double report = seconds_since(t0);

  std::ostringstream d;
  d << "ring " << ring_bad << " failures; stabilization " << stab_bad << "/" << pairs
    << " pairs differ; Watson " << watson_bad << " failures; kernel residual " << residual
    << "; iff " << iff_bad << " failures; report " << report << " s";
  return {ring_bad == 0 && stab_bad == 0 && watson_bad == 0 && residual <= 1e-12 &&
              iff_bad == 0 && report < 60,
          d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Bessel table", bessel_table},
      {"isotypic decomposition", isotypic},
      {"maximal orbit types", maximal},
      {"basic degrees", basic_degrees},
      {"critical set", critical_set},
      {"local invariants", local_invariants},
      {"folding profiles", folding_profiles},
      {"closed forms vs brute force", closed_forms},
      {"global verdicts", verdicts},
      {"property suites", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    failed += !out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first
              << ": " << out.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
