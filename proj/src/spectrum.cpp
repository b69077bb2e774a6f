#include "equideg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equideg/error.hpp"

namespace equideg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxRefinement = 200;

double series_j(int m, double x) {
  const long double half = x / 2.0L;
  const long double q = -half * half;
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i) term *= half / i;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Miller's algorithm: downward recurrence from a point well beyond max(m, x),
// normalized with J_0 + 2 (J_2 + J_4 + ...) = 1.
double miller_j(int m, double x) {
  const double top = std::max<double>(m, x);
  int start = static_cast<int>(top + 20 + std::sqrt(60.0 * top));
  start += start % 2;
  const double two_over_x = 2.0 / x;
  double next = 0.0;
  double cur = 1e-300;
  double norm = 0.0;
  double result = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
    // cur now holds J_{k-1}.
    if (k - 1 == m) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;
  return result / norm;
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0) throw Error(ErrorCode::SchemaError, "negative Bessel order");
  if (x < 0) return (m % 2 == 0 ? 1 : -1) * bessel_j(m, -x);
  if (x == 0) return m == 0 ? 1.0 : 0.0;
  if (x <= 12.0) return series_j(m, x);
  return miller_j(m, x);
}

double bessel_j_prime(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

std::vector<double> bessel_zeros(int m, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  out.reserve(count);
  const double step = 0.5;
  double lo = std::max(static_cast<double>(m), 1.0);
  double flo = bessel_j(m, lo);
  const double mu = 4.0 * m * m;
  while (static_cast<int>(out.size()) < count) {
    const double hi = lo + step;
    const double fhi = bessel_j(m, hi);
    if (fhi == 0.0) {
      out.push_back(hi);
      lo = hi + 1e-9;
      flo = bessel_j(m, lo);
      continue;
    }
    if ((flo < 0) != (fhi < 0)) {
      const int n = static_cast<int>(out.size()) + 1;
      const double beta = (n + 0.5 * m - 0.25) * kPi;
      double x = beta - (mu - 1.0) / (8.0 * beta);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
      double a = lo;
      double b = hi;
      double fa = flo;
      bool done = false;
      for (int it = 0; it < kMaxRefinement; ++it) {
        const double fx = bessel_j(m, x);
        if (fx == 0.0) {
          done = true;
          break;
        }
        if ((fx < 0) == (fa < 0)) {
          a = x;
          fa = fx;
        } else {
          b = x;
        }
        double nx = x - fx / bessel_j_prime(m, x);
        if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
        if (std::fabs(nx - x) <= 4e-16 * x || b - a <= 4e-16 * x) {
          x = nx;
          done = true;
          break;
        }
        x = nx;
      }
      if (!done) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "zero " + std::to_string(n) + " of J_" + std::to_string(m));
      }
      out.push_back(x);
    }
    lo = hi;
    flo = fhi;
  }
  return out;
}

double bessel_zero_sq(int m, int n) {
  if (m < 0 || m > 200 || n < 1 || n > 200) {
    throw Error(ErrorCode::SchemaError, "Bessel zero index out of range");
  }
  const double z = bessel_zeros(m, n).back();
  return z * z;
}

BesselZeroTable BesselZeroTable::build(int m_max, int n_max) {
  if (m_max < 0 || n_max < 1 || m_max > 200 || n_max > 200) {
    throw Error(ErrorCode::SchemaError, "Bessel table horizon out of range");
  }
  BesselZeroTable t;
  t.m_max_ = m_max;
  t.n_max_ = n_max;
  t.entries_.resize(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    for (double z : bessel_zeros(m, n_max)) t.entries_[m].push_back(z * z);
  }
  return t;
}

BesselZeroTable BesselZeroTable::from_entries(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::SchemaError, "empty table");
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) {
      throw Error(ErrorCode::SchemaError, "table rows must have equal length");
    }
    for (std::size_t n = 0; n < row.size(); ++n) {
      if (!(row[n] > 0) || (n > 0 && !(row[n] > row[n - 1]))) {
        throw Error(ErrorCode::SchemaError, "table rows must be positive and increasing");
      }
    }
  }
  BesselZeroTable t;
  t.m_max_ = static_cast<int>(rows.size()) - 1;
  t.n_max_ = static_cast<int>(rows.front().size());
  t.entries_ = std::move(rows);
  return t;
}

double BesselZeroTable::s(int m, int n) const {
  if (m < 0 || m > m_max_ || n < 1 || n > n_max_) {
    throw Error(ErrorCode::InsufficientHorizon,
                "s(" + std::to_string(m) + "," + std::to_string(n) + ") outside table");
  }
  return entries_[m][n - 1];
}

bool BesselZeroTable::covers(double bound) const {
  if (static_cast<double>(m_max_) * (m_max_ + 2) <= bound) return false;
  for (const auto& row : entries_) {
    if (row.back() <= bound) return false;
  }
  return true;
}

void BesselZeroTable::require_cover(double bound) const {
  if (covers(bound)) return;
  int m = m_max_;
  while (static_cast<double>(m) * (m + 2) <= bound) ++m;
  int n = n_max_;
  for (const auto& row : entries_) {
    while (n < static_cast<int>(row.size()) && row[n - 1] <= bound) ++n;
    if (row.back() <= bound) n = std::max(n, static_cast<int>(row.size()) + 1);
  }
  throw Error(ErrorCode::InsufficientHorizon,
              "eigenvalues up to " + std::to_string(bound) + " need at least m_max=" +
                  std::to_string(m) + ", n_max=" + std::to_string(n));
}

BesselZeroTable BesselZeroTable::covering(double bound, int m_max, int n_max) {
  while (static_cast<double>(m_max) * (m_max + 2) <= bound) ++m_max;
  for (;;) {
    auto t = build(m_max, n_max);
    if (t.covers(bound)) return t;
    n_max = std::min(200, n_max * 2);
  }
}

ZetaProfile ZetaProfile::sigmoid() { return {}; }

ZetaProfile ZetaProfile::tabulated(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::NonMonotoneCurve, "tabulated profile needs two breakpoints");
  }
  const bool up = breakpoints[1].second > breakpoints[0].second;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const auto& [a0, z0] = breakpoints[i - 1];
    const auto& [a1, z1] = breakpoints[i];
    if (!(a1 > a0) || (up ? !(z1 > z0) : !(z1 < z0))) {
      throw Error(ErrorCode::NonMonotoneCurve, "breakpoints are not strictly monotone");
    }
  }
  ZetaProfile out;
  out.breakpoints_ = std::move(breakpoints);
  return out;
}

double ZetaProfile::operator()(double alpha) const {
  if (is_sigmoid()) return 1.0 / (1.0 + std::exp(-alpha));
  if (alpha <= breakpoints_.front().first) return breakpoints_.front().second;
  if (alpha >= breakpoints_.back().first) return breakpoints_.back().second;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), alpha,
                             [](double x, const auto& p) { return x < p.first; });
  const auto& [a1, z1] = *it;
  const auto& [a0, z0] = *(it - 1);
  return z0 + (z1 - z0) * (alpha - a0) / (a1 - a0);
}

std::pair<double, double> ZetaProfile::range() const {
  if (is_sigmoid()) return {0.0, 1.0};
  const double a = breakpoints_.front().second;
  const double b = breakpoints_.back().second;
  return {std::min(a, b), std::max(a, b)};
}

bool ZetaProfile::increasing() const {
  return is_sigmoid() || breakpoints_.back().second > breakpoints_.front().second;
}

double ZetaProfile::inverse(double level) const {
  const auto [lo, hi] = range();
  if (!(level > lo && level < hi)) {
    throw Error(ErrorCode::SchemaError, "level outside the profile range");
  }
  if (is_sigmoid()) return std::log(level / (1.0 - level));
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    const auto& [a0, z0] = breakpoints_[i - 1];
    const auto& [a1, z1] = breakpoints_[i];
    if ((level - z0) * (level - z1) <= 0) return a0 + (a1 - a0) * (level - z0) / (z1 - z0);
  }
  return breakpoints_.back().first;
}

EigenvalueCurve::EigenvalueCurve(std::size_t j, double a, double weight, ZetaProfile zeta)
    : j_(j), a_(a), weight_(weight), zeta_(std::move(zeta)) {
  if (weight_ == 0.0 || !std::isfinite(weight_) || !std::isfinite(a_)) {
    throw Error(ErrorCode::NonMonotoneCurve,
                "eigenvalue curve of block " + std::to_string(j) + " is constant");
  }
}

double EigenvalueCurve::mu(double alpha) const { return a_ + weight_ * zeta_(alpha); }

std::pair<double, double> EigenvalueCurve::codomain() const {
  const auto [lo, hi] = zeta_.range();
  const double x = a_ + weight_ * lo;
  const double y = a_ + weight_ * hi;
  return {std::min(x, y), std::max(x, y)};
}

std::optional<double> EigenvalueCurve::alpha_at(double s) const {
  const double level = zeta_level(s);
  const auto [lo, hi] = zeta_.range();
  if (!(level > lo && level < hi)) return std::nullopt;
  return zeta_.inverse(level);
}

double eigenvalue_xi(const EigenvalueCurve& curve, const BesselZeroTable& table, int n, int m,
                     double alpha) {
  return 1.0 - curve.mu(alpha) / table.s(m, n);
}

std::string to_string(const Triple& t) {
  return "(" + std::to_string(t.n) + "," + std::to_string(t.m) + "," + std::to_string(t.j) + ")";
}

std::vector<CriticalPoint> critical_points(const std::vector<EigenvalueCurve>& curves,
                                           const BesselZeroTable& table) {
  std::vector<CriticalPoint> out;
  if (curves.empty()) return out;
  double sup = curves.front().codomain().second;
  for (const auto& c : curves) sup = std::max(sup, c.codomain().second);
  table.require_cover(sup);
  for (const auto& c : curves) {
    const auto [lo, hi] = c.codomain();
    for (int m = 0; m <= table.m_max(); ++m) {
      for (int n = 1; n <= table.n_max(); ++n) {
        const double s = table.s(m, n);
        if (!(s > lo && s < hi)) continue;
        auto alpha = c.alpha_at(s);
        if (!alpha) continue;
        out.push_back({{n, m, c.j()}, *alpha, c.zeta_level(s), s});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& x, const CriticalPoint& y) {
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.id < y.id;
  });
  return out;
}

IndexSets index_sets(const std::vector<EigenvalueCurve>& curves, const BesselZeroTable& table,
                     double alpha, const std::vector<std::int64_t>& multiplicities) {
  IndexSets out;
  out.sigma_minus = {IndexSetKind::SigmaMinus, alpha, {}};
  out.sigma = {IndexSetKind::Sigma, alpha, {}};
  out.sigma_k = {IndexSetKind::SigmaK, alpha, {}};
  for (const auto& c : curves) {
    if (c.j() >= multiplicities.size()) {
      throw Error(ErrorCode::SchemaError, "curve block without multiplicity");
    }
    const auto mult = multiplicities[c.j()];
    if (mult <= 0) continue;
    const double mu = c.mu(alpha);
    table.require_cover(mu);
    for (int m = 0; m <= table.m_max(); ++m) {
      for (int n = 1; n <= table.n_max(); ++n) {
        const double s = table.s(m, n);
        if (s > mu * (1 + 1e-12)) break;
        if (std::fabs(mu - s) <= 1e-12 * s) {
          throw Error(ErrorCode::AlphaIsCritical,
                      "alpha=" + std::to_string(alpha) + " hits " + to_string(Triple{n, m, c.j()}));
        }
        const Triple t{n, m, c.j()};
        out.sigma_minus.triples.push_back(t);
        if (mult % 2 == 1) {
          out.sigma.triples.push_back(t);
          if (m % 2 == 1) out.sigma_k.triples.push_back(t);
        }
      }
    }
  }
  for (auto* set : {&out.sigma_minus, &out.sigma, &out.sigma_k}) {
    std::sort(set->triples.begin(), set->triples.end());
  }
  return out;
}

AprioriBound a_priori_root(double c, double d, double nu) {
  if (!(nu > 0 && nu < 1) || c < 0 || d < 0) {
    throw Error(ErrorCode::SchemaError, "a-priori bound needs c, d >= 0 and 0 < nu < 1");
  }
  AprioriBound out{c, d, d, d};
  if (c == 0) return out;
  auto psi = [&](double t) { return t - c * std::pow(t, nu) - d; };
  double lo = std::pow(c * nu, 1.0 / (1.0 - nu));
  double hi = std::max(1.0, 2.0 * lo);
  while (psi(hi) <= 0) hi *= 2;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) > 0 ? hi : lo) = mid;
  }
  out.root = 0.5 * (lo + hi);
  out.radius = c * std::pow(out.root, nu) + d;
  return out;
}

AprioriBound a_priori_radius(double a_alpha, double b_alpha, double nu, double q, double op_norm) {
  if (!(q > std::max(1.0, 2.0 * nu)) || op_norm <= 0) {
    throw Error(ErrorCode::SchemaError, "a-priori bound needs q > max(1, 2 nu) and a norm > 0");
  }
  const double c = a_alpha * std::pow(kPi, 0.5 - nu / q) * op_norm;
  const double d = b_alpha * std::sqrt(kPi) * op_norm;
  return a_priori_root(c, d, nu);
}

Eigen::VectorXd KernelMode::operator()(double r, double theta) const {
  const double radial = bessel_j(id.m, std::sqrt(s) * r);
  return radial * (std::cos(id.m * theta) * a + std::sin(id.m * theta) * b);
}

std::vector<GridSample> sample_grid(const KernelMode& mode, int resolution) {
  if (resolution < 2) throw Error(ErrorCode::SchemaError, "grid resolution below 2");
  std::vector<GridSample> out;
  out.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double r = static_cast<double>(i) / (resolution - 1);
    for (int k = 0; k < resolution; ++k) {
      const double theta = 2 * kPi * k / resolution;
      out.push_back({r, theta, mode(r, theta)});
    }
  }
  return out;
}

Eigen::MatrixXd mode_action(const AmbientGroup& ambient, const GElement& g, int m,
                            const std::vector<Eigen::MatrixXd>& gamma_matrices) {
  const auto& p = gamma_matrices.at(ambient.gamma_part(g.gamma));
  const Eigen::Index k = p.rows();
  const double phi = 2 * kPi * m * static_cast<double>(g.angle) / kAngleDenominator;
  Eigen::Matrix2d o2;
  o2 << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  if (g.reflection) o2.col(1) *= -1;
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out.block(r * k, c * k, k, k) = o2(r, c) * ambient.sign(g.gamma) * p;
  }
  return out;
}

Eigen::MatrixXd fixed_mode_basis(const OrbitType& h, int m, const Eigen::MatrixXd& eigenbasis,
                                 const std::vector<Eigen::MatrixXd>& gamma_matrices) {
  const auto& amb = h.ambient();
  const Eigen::Index k = eigenbasis.rows();
  const Eigen::Index e = eigenbasis.cols();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * k, 2 * e);
  basis.block(0, 0, k, e) = eigenbasis;
  basis.block(k, e, k, e) = eigenbasis;
  // Fixed coefficients c solve (g - 1) basis c = 0 for every g in h.
  std::vector<Eigen::MatrixXd> rows;
  Eigen::Index total = 0;
  for (const auto& g : elements_of(h)) {
    rows.push_back((mode_action(amb, g, m, gamma_matrices) - Eigen::MatrixXd::Identity(2 * k, 2 * k)) *
                   basis);
    total += rows.back().rows();
  }
  Eigen::MatrixXd system(total, 2 * e);
  Eigen::Index at = 0;
  for (const auto& r : rows) {
    system.block(at, 0, r.rows(), r.cols()) = r;
    at += r.rows();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-9);
  if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd(2 * k, 0);
  return basis * lu.kernel();
}

KernelMode make_mode(const CriticalPoint& cp, const Eigen::VectorXd& stacked) {
  const Eigen::Index k = stacked.size() / 2;
  return {cp.id, cp.s, stacked.head(k), stacked.tail(k)};
}

}  // namespace equideg
