#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "equideg/error.hpp"
#include "equideg/model_io.hpp"
#include "equideg/spectrum.hpp"
#include "fixtures.hpp"

using namespace equideg;

namespace {

std::vector<EigenvalueCurve> membrane_curves() {
  return {{0, 32, 16, ZetaProfile::sigmoid()},
          {2, 32, 22, ZetaProfile::sigmoid()},
          {3, 32, 20, ZetaProfile::sigmoid()}};
}

const Model& model() {
  static const Model m = load_model(EQUIDEG_DATA "/six_membranes.json");
  return m;
}

// J_0 by its power series, for an independent root.
double j0_series(double x) {
  double term = 1, sum = 1;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4) / (k * k);
    sum += term;
  }
  return sum;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::SchemaError;
}

}  // namespace

TEST_CASE("squared Bessel zeros reproduce the listed table") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = BesselZeroTable::build(10, 9);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(seconds < 2.0);
  // Entries printed with fewer than three decimals cannot all meet 1e-3; they
  // are checked at their printed precision and counted.
  int beyond = 0;
  for (int m = 0; m <= 10; ++m) {
    const auto want = fixtures::tokens("bessel m" + std::to_string(m));
    REQUIRE(want.size() == 9);
    for (int n = 1; n <= 9; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const double diff = std::fabs(table.s(m, n) - std::stod(want[n - 1]));
      CHECK(diff <= std::max(1e-3, fixtures::print_tolerance(want[n - 1])));
      if (diff >= 1e-3) ++beyond;
    }
  }
  MESSAGE(beyond << " of 99 entries differ from the printed value by 1e-3 or more");
  CHECK(bessel_zero_sq(0, 1) == doctest::Approx(5.783).epsilon(1e-4));
  CHECK(bessel_zero_sq(3, 1) == doctest::Approx(40.706).epsilon(1e-4));
}

TEST_CASE("first zero of J_0 by bisection on the series") {
  double lo = 2, hi = 3;
  for (int k = 0; k < 200; ++k) {
    const double mid = (lo + hi) / 2;
    (j0_series(lo) * j0_series(mid) <= 0 ? hi : lo) = mid;
  }
  CHECK(std::fabs(bessel_zero_sq(0, 1) - lo * lo) < 1e-9);
  CHECK(std::fabs(lo - 2.404825557695773) < 1e-12);
}

TEST_CASE("zeros against Boost.Math") {
  for (int m : {0, 1, 2, 5, 12, 20, 50, 120, 200}) {
    for (int n : {1, 2, 7, 30, 100, 200}) {
      const double z = boost::math::cyl_bessel_j_zero(static_cast<double>(m), n);
      CAPTURE(m);
      CAPTURE(n);
      CHECK(std::fabs(bessel_zero_sq(m, n) - z * z) <= 1e-9 * std::max(1.0, z * z));
    }
  }
  for (double x : {0.5, 3.0, 11.9, 12.1, 40.0, 150.0}) {
    for (int m : {0, 1, 4, 30}) {
      CHECK(std::fabs(bessel_j(m, x) - boost::math::cyl_bessel_j(m, x)) < 1e-10);
    }
  }
  CHECK(code_of([] { bessel_zero_sq(201, 1); }) == ErrorCode::SchemaError);
}

TEST_CASE("property: Watson bound and interlacing") {
  for (int m = 0; m <= 20; ++m) CHECK(bessel_zero_sq(m, 1) > m * (m + 2));
  const auto table = BesselZeroTable::build(12, 12);
  for (int m = 0; m < 12; ++m) {
    for (int n = 1; n < 12; ++n) {
      CHECK(table.s(m, n) < table.s(m + 1, n));
      CHECK(table.s(m + 1, n) < table.s(m, n + 1));
      CHECK(table.s(m, n) < table.s(m, n + 1));
    }
  }
}

TEST_CASE("table horizon") {
  const auto table = BesselZeroTable::build(3, 2);
  CHECK(!table.covers(60));
  CHECK(code_of([&] { table.require_cover(60); }) == ErrorCode::InsufficientHorizon);
  const auto cover = BesselZeroTable::covering(60, 3, 2);
  CHECK(cover.covers(60));
  CHECK(cover.m_max() * (cover.m_max() + 2) > 60);

  const auto synthetic = BesselZeroTable::from_entries({{1, 2}, {3, 4}});
  CHECK(synthetic.m_max() == 1);
  CHECK(synthetic.n_max() == 2);
  CHECK(synthetic.s(1, 2) == 4);
  CHECK(code_of([] { BesselZeroTable::from_entries({{2, 1}}); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { BesselZeroTable::from_entries({{1, 2}, {3}}); }) == ErrorCode::SchemaError);
}

TEST_CASE("eigenvalue curves and xi") {
  const auto curves = membrane_curves();
  const auto table = BesselZeroTable::covering(60);
  const auto& c = curves[1];
  CHECK(c.codomain().first == 32);
  CHECK(c.codomain().second == 54);
  const auto alpha = *c.alpha_at(table.s(3, 1));
  CHECK(eigenvalue_xi(c, table, 1, 3, alpha) == doctest::Approx(0).scale(1));
  CHECK(std::fabs(eigenvalue_xi(c, table, 1, 3, alpha)) < 1e-12);
  CHECK(eigenvalue_xi(c, table, 1, 3, alpha - 1) > 0);
  CHECK(eigenvalue_xi(c, table, 1, 3, alpha + 1) < 0);
  CHECK(eigenvalue_xi(curves[0], table, 1, 0, -60) ==
        doctest::Approx(1 - 32 / table.s(0, 1)).epsilon(1e-12));
  CHECK(!c.alpha_at(60).has_value());
  CHECK(!c.alpha_at(20).has_value());
}

TEST_CASE("tabulated profiles") {
  const auto z = ZetaProfile::tabulated({{-1, 0}, {0, 0.5}, {2, 1}});
  CHECK(z(-5) == 0);
  CHECK(z(1) == doctest::Approx(0.75));
  CHECK(z.inverse(0.75) == doctest::Approx(1));
  CHECK(z.increasing());
  CHECK(code_of([] { ZetaProfile::tabulated({{0, 0}, {1, 1}, {2, 0.5}}); }) ==
        ErrorCode::NonMonotoneCurve);
}

TEST_CASE("critical set of the six-membrane model") {
  const auto curves = membrane_curves();
  const auto table = BesselZeroTable::covering(60);
  const auto cps = critical_points(curves, table);
  const std::vector<Triple> want{{1, 3, 2}, {1, 3, 3}, {1, 3, 0}, {2, 1, 2}, {2, 1, 3}};
  REQUIRE(cps.size() == want.size());
  const std::vector<double> weight{16, 0, 22, 20};
  for (std::size_t i = 0; i < cps.size(); ++i) {
    CHECK(cps[i].id == want[i]);
    const double s = bessel_zero_sq(want[i].m, want[i].n);
    const double level = (s - 32) / weight[want[i].j];
    CHECK(std::fabs(cps[i].zeta_level - level) < 1e-9);
    CHECK(std::fabs(cps[i].alpha - std::log(level / (1 - level))) < 1e-9);
    const auto& curve = *std::find_if(curves.begin(), curves.end(),
                                      [&](const auto& c) { return c.j() == want[i].j; });
    CHECK(std::fabs(curve.mu(cps[i].alpha) - s) <= 1e-10 * s);
    if (i > 0) CHECK(cps[i - 1].alpha < cps[i].alpha);
  }
  // Curves below every zero: no crossing.
  CHECK(critical_points({{0, 1, 2, ZetaProfile::sigmoid()}}, table).empty());
  CHECK(critical_points({}, table).empty());
}

TEST_CASE("index sets") {
  const auto curves = membrane_curves();
  const auto table = BesselZeroTable::covering(60);
  const std::vector<std::int64_t> mult{1, 0, 1, 1, 0};
  for (double alpha : {-20.0, -1.0, 0.3, 5.0, 20.0}) {
    const auto sets = index_sets(curves, table, alpha, mult);
    for (std::size_t j : {0, 2, 3}) {
      const Triple t{1, 0, j};
      CHECK(std::count(sets.sigma_minus.triples.begin(), sets.sigma_minus.triples.end(), t) == 1);
    }
    CHECK(sets.sigma.triples == sets.sigma_minus.triples);
    for (const auto& t : sets.sigma_k.triples) CHECK(t.m % 2 == 1);
    for (const auto& t : sets.sigma.triples) {
      if (t.m % 2 == 1) {
        CHECK(std::count(sets.sigma_k.triples.begin(), sets.sigma_k.triples.end(), t) == 1);
      }
    }
  }
  const auto even = index_sets(curves, table, 0, {1, 0, 2, 1, 0});
  for (const auto& t : even.sigma.triples) CHECK(t.j != 2);
  const auto cps = critical_points(curves, table);
  CHECK(code_of([&] { index_sets(curves, table, cps[0].alpha, mult); }) ==
        ErrorCode::AlphaIsCritical);
}

TEST_CASE("a-priori bound") {
  const auto r = a_priori_root(1, 0, 0.5);
  CHECK(r.root == doctest::Approx(1).epsilon(1e-9));
  CHECK(r.radius == doctest::Approx(1).epsilon(1e-9));
  const auto zero = a_priori_root(0, 3, 0.5);
  CHECK(zero.root == doctest::Approx(3));
  CHECK(zero.radius == doctest::Approx(3));
  const auto base = a_priori_radius(1, 1, 0.5, 2, 0.2);
  CHECK(a_priori_radius(2, 1, 0.5, 2, 0.2).radius > base.radius);
  CHECK(a_priori_radius(1, 2, 0.5, 2, 0.2).radius > base.radius);
  CHECK(base.root - base.c * std::pow(base.root, 0.5) - base.d == doctest::Approx(0).scale(1));
}

TEST_CASE("kernel at (1,3,2): eigenspace, restricted mode and grid") {
  const auto& mdl = model();
  const auto& cp = mdl.problem->point({1, 3, 2});
  const CouplingBlock* block = nullptr;
  for (const auto& b : mdl.spectrum) {
    if (b.j == 2) block = &b;
  }
  REQUIRE(block != nullptr);
  CHECK(block->dimension == 2);

  Eigen::VectorXd w1(6), w2(6);
  w1 << -1, 1, -1, 1, 0, 0;
  w2 << 1, 0, 1, 0, -1, -1;
  const Eigen::MatrixXd q = block->basis;
  CHECK((q * (q.transpose() * w1) - w1).norm() < 1e-12);
  CHECK((q * (q.transpose() * w2) - w2).norm() < 1e-12);

  OrbitType h;
  for (const auto& k : maximal_types(*mdl.ambient, {1, 2})) {
    if (symbol(k) == "(D2^D1 x^D4 D4p)") h = k;
  }
  REQUIRE(h.valid());
  const auto h3 = fold(h, 3);
  const auto gammas = mdl.gamma_matrices();
  const Eigen::MatrixXd fixed = fixed_mode_basis(h3, 3, q, gammas);
  REQUIRE(fixed.cols() == 1);
  const Eigen::VectorXd stacked = fixed.col(0);
  const auto mode = make_mode(cp, stacked);
  CHECK(mode.b.norm() < 1e-12);

  for (const auto& g : elements_of(h3)) {
    CHECK((mode_action(*mdl.ambient, g, 3, gammas) * stacked - stacked).norm() < 1e-12);
  }

  // The fixed vector is a Gamma-translate of w1 + 2 w2 = (1,1,1,1,-2,-2).
  Eigen::VectorXd target = w1 + 2 * w2;
  target.normalize();
  bool conjugate = false;
  for (const auto& p : gammas) {
    const Eigen::VectorXd v = (p * mode.a).normalized();
    conjugate = conjugate || (v - target).norm() < 1e-12 || (v + target).norm() < 1e-12;
  }
  CHECK(conjugate);

  const auto grid = sample_grid(mode, 200);
  CHECK(grid.size() == 200u * 200u);
  double boundary = 0, rot = 0, half = 0, mirror = 0;
  for (const auto& p : grid) {
    if (p.r == 1) boundary = std::max(boundary, p.value.cwiseAbs().maxCoeff());
    const double pi = std::numbers::pi;
    rot = std::max(rot, (mode(p.r, p.theta + 2 * pi / 3) - p.value).cwiseAbs().maxCoeff());
    half = std::max(half, (mode(p.r, p.theta + pi / 3) + p.value).cwiseAbs().maxCoeff());
    mirror = std::max(mirror, (mode(p.r, -p.theta) - p.value).cwiseAbs().maxCoeff());
  }
  CHECK(boundary < 1e-9);
  CHECK(rot <= 1e-12);
  CHECK(half <= 1e-12);
  CHECK(mirror <= 1e-12);
}

TEST_CASE("(1,2,3,4) fixes a1 w1 + a2 w2 iff a2 = 2 a1") {
  Eigen::VectorXd w1(6), w2(6);
  w1 << -1, 1, -1, 1, 0, 0;
  w2 << 1, 0, 1, 0, -1, -1;
  const Eigen::MatrixXd p = permutation_matrix(Permutation::parse_cycles("(1,2,3,4)", 6));
  for (int a1 = -4; a1 <= 4; ++a1) {
    for (int a2 = -8; a2 <= 8; ++a2) {
      const Eigen::VectorXd a = a1 * w1 + a2 * w2;
      CHECK((p * a == a) == (a2 == 2 * a1));
    }
  }
}

TEST_CASE("radial modes") {
  const auto& mdl = model();
  CriticalPoint cp;
  cp.id = {1, 0, 0};
  cp.s = bessel_zero_sq(0, 1);
  Eigen::VectorXd stacked = Eigen::VectorXd::Zero(12);
  stacked.head(6).setOnes();
  stacked.tail(6).setConstant(0.3);
  const auto mode = make_mode(cp, stacked);
  for (double r : {0.0, 0.4, 0.9}) {
    CHECK((mode(r, 0.1) - mode(r, 2.5)).norm() < 1e-15);
  }
  CHECK(mdl.curves.size() == 3);
}
