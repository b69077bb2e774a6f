#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "equideg/degrees.hpp"
#include "equideg/finite_group.hpp"
#include "equideg/orbit_types.hpp"

namespace equideg {

/// J_m(x) for m >= 0, x >= 0. Ascending series for x <= 12, Miller's backward
/// recurrence otherwise.
double bessel_j(int m, double x);
double bessel_j_prime(int m, double x);

/// First `count` positive zeros of J_m. Throws ConvergenceFailure when a root
/// does not settle within 200 refinement steps.
std::vector<double> bessel_zeros(int m, int count);
/// Square of the n-th positive zero of J_m (n >= 1); m, n <= 200.
double bessel_zero_sq(int m, int n);

/// s[m][n-1] = (n-th zero of J_m)^2 for m <= m_max, n <= n_max.
class BesselZeroTable {
 public:
  static BesselZeroTable build(int m_max, int n_max);
  /// Smallest table (growing from the given horizon) whose entries cover
  /// every eigenvalue below `bound`.
  static BesselZeroTable covering(double bound, int m_max = 12, int n_max = 12);
  /// Table with prescribed entries (rows of equal length, strictly increasing),
  /// for synthetic spectra.
  static BesselZeroTable from_entries(std::vector<std::vector<double>> rows);

  int m_max() const { return m_max_; }
  int n_max() const { return n_max_; }
  double s(int m, int n) const;
  const std::vector<std::vector<double>>& entries() const { return entries_; }

  /// m_max(m_max+2) > bound and s[m][n_max] > bound for every m.
  bool covers(double bound) const;
  /// Throws InsufficientHorizon naming the horizon that would suffice.
  void require_cover(double bound) const;

 private:
  int m_max_ = 0;
  int n_max_ = 0;
  std::vector<std::vector<double>> entries_;
};

/// Monotone bounded profile zeta(alpha): the logistic sigmoid, or linear
/// interpolation of breakpoints (constant outside them).
class ZetaProfile {
 public:
  static ZetaProfile sigmoid();
  /// Breakpoints sorted by alpha with strictly monotone levels; throws
  /// NonMonotoneCurve otherwise.
  static ZetaProfile tabulated(std::vector<std::pair<double, double>> breakpoints);

  bool is_sigmoid() const { return breakpoints_.empty(); }
  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }

  double operator()(double alpha) const;
  /// Open range of levels attained on a strictly monotone piece.
  std::pair<double, double> range() const;
  bool increasing() const;
  /// Alpha with zeta(alpha) = level; level must lie in the open range.
  double inverse(double level) const;

 private:
  std::vector<std::pair<double, double>> breakpoints_;
};

/// mu_j(alpha) = a + weight * zeta(alpha) on the isotypic block j.
class EigenvalueCurve {
 public:
  EigenvalueCurve(std::size_t j, double a, double weight, ZetaProfile zeta);

  std::size_t j() const { return j_; }
  double a() const { return a_; }
  double weight() const { return weight_; }
  const ZetaProfile& zeta() const { return zeta_; }

  double mu(double alpha) const;
  /// Open interval (inf mu, sup mu).
  std::pair<double, double> codomain() const;
  double zeta_level(double s) const { return (s - a_) / weight_; }
  std::optional<double> alpha_at(double s) const;

 private:
  std::size_t j_;
  double a_;
  double weight_;
  ZetaProfile zeta_;
};

/// xi_{n,m,j}(alpha) = 1 - mu_j(alpha) / s_nm.
double eigenvalue_xi(const EigenvalueCurve& curve, const BesselZeroTable& table, int n, int m,
                     double alpha);

struct CriticalPoint {
  Triple id;
  double alpha = 0;
  double zeta_level = 0;
  double s = 0;
};

std::string to_string(const Triple& t);

/// Critical points of all curves sorted by alpha.
std::vector<CriticalPoint> critical_points(const std::vector<EigenvalueCurve>& curves,
                                           const BesselZeroTable& table);

enum class IndexSetKind { SigmaMinus, Sigma, SigmaK };

struct SpectrumIndexSet {
  IndexSetKind kind = IndexSetKind::Sigma;
  double alpha = 0;
  std::vector<Triple> triples;
};

struct IndexSets {
  SpectrumIndexSet sigma_minus;
  SpectrumIndexSet sigma;
  SpectrumIndexSet sigma_k;
};

/// Negative spectrum at alpha, its restriction to odd isotypic multiplicity
/// and to odd m. multiplicities[j] is m_j. Throws AlphaIsCritical.
IndexSets index_sets(const std::vector<EigenvalueCurve>& curves, const BesselZeroTable& table,
                     double alpha, const std::vector<std::int64_t>& multiplicities);

struct AprioriBound {
  double c = 0;
  double d = 0;
  double root = 0;    // R0
  double radius = 0;  // R
};

/// Root R0 of t - c t^nu - d and R = c R0^nu + d.
AprioriBound a_priori_root(double c, double d, double nu);
/// Constants of the growth bound |f| < a|u|^nu + b, then a_priori_root.
AprioriBound a_priori_radius(double a_alpha, double b_alpha, double nu, double q, double op_norm);

/// J_m(sqrt(s) r) (cos(m theta) a + sin(m theta) b).
struct KernelMode {
  Triple id;
  double s = 0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;

  Eigen::VectorXd operator()(double r, double theta) const;
};

struct GridSample {
  double r = 0;
  double theta = 0;
  Eigen::VectorXd value;
};

/// r_i = i/(R-1), theta_k = 2 pi k / R, row-major in r.
std::vector<GridSample> sample_grid(const KernelMode& mode, int resolution);

/// Action of an element of O(2) x Gamma' on the coefficient pair (a, b) of a
/// mode at frequency m; gamma_matrices[g] is the matrix of g in Gamma.
Eigen::MatrixXd mode_action(const AmbientGroup& ambient, const GElement& g, int m,
                            const std::vector<Eigen::MatrixXd>& gamma_matrices);

/// Basis (columns, stacked as (a; b)) of the pairs with a, b in the span of
/// `eigenbasis` that are fixed by every element of h.
Eigen::MatrixXd fixed_mode_basis(const OrbitType& h, int m, const Eigen::MatrixXd& eigenbasis,
                                 const std::vector<Eigen::MatrixXd>& gamma_matrices);

/// Mode from a stacked (a; b) coefficient vector.
KernelMode make_mode(const CriticalPoint& cp, const Eigen::VectorXd& stacked);

}  // namespace equideg
