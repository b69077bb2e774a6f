#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "equideg/burnside.hpp"
#include "equideg/degrees.hpp"
#include "equideg/spectrum.hpp"

namespace equideg {

enum class InvariantMode { Full, Relative };

std::string to_string(InvariantMode mode);
InvariantMode parse_mode(const std::string& text);

struct LocalInvariant {
  Triple id;
  InvariantMode mode = InvariantMode::Full;
  bool k_fixed = false;
  double alpha_minus = 0;
  double alpha_plus = 0;
  BurnsideElement value;
};

/// Folding statistics of one maximal type at one critical point. Maps are
/// keyed by the folding s over every s >= 1 that occurs as an m in the index
/// sets on either side.
struct FoldingProfile {
  Triple id;
  OrbitType h;
  std::map<int, int> n_minus;
  std::map<int, int> n_plus;
  std::map<int, int> m_minus;
  std::map<int, int> m_plus;
  std::map<int, int> indicator;
  /// Largest s with a nonzero indicator, 0 when there is none.
  int s_max = 0;
};

/// Closed form of a coefficient together with its brute-force value.
struct CoefficientCheck {
  Triple id;
  OrbitType h;
  int s = 0;
  std::int64_t closed_form = 0;
  std::int64_t brute_force = 0;
  bool agrees() const { return closed_form == brute_force; }
};

struct BranchCertificate {
  Triple id;
  double alpha = 0;
  OrbitType h;
  int s = 0;
  OrbitType symmetry;  // (^s H)
  std::int64_t coefficient = 0;
  std::string statement;
};

enum class Conclusion { UnboundedBranch, Inconclusive };

struct GlobalVerdict {
  OrbitType h;
  int s_bar = 0;
  std::vector<Triple> members;
  Conclusion conclusion = Conclusion::Inconclusive;
  std::string alternative;
};

std::string to_string(Conclusion c);

/// Linearization data of one model: basic degrees, eigenvalue curves, Bessel
/// table and isotypic multiplicities, with the K-fixed (odd m) filter.
class BifurcationProblem {
 public:
  BifurcationProblem(std::shared_ptr<const DegreeCache> degrees, std::vector<EigenvalueCurve> curves,
                     BesselZeroTable table, std::vector<std::int64_t> multiplicities, bool k_fixed,
                     double bracket_width = 1.0);

  const DegreeCache& degrees() const { return *degrees_; }
  const AmbientGroup& ambient() const { return degrees_->ambient(); }
  const std::vector<EigenvalueCurve>& curves() const { return curves_; }
  const BesselZeroTable& table() const { return table_; }
  const std::vector<std::int64_t>& multiplicities() const { return multiplicities_; }
  bool k_fixed() const { return k_fixed_; }

  /// Every crossing, sorted by alpha.
  const std::vector<CriticalPoint>& critical_points() const { return critical_; }
  /// Crossings that change the filtered index set (Lambda^K when k_fixed).
  std::vector<CriticalPoint> relevant_points() const;
  const CriticalPoint& point(const Triple& id) const;

  /// alpha0 -/+ min(width, half-gap to the neighbors); throws NotIsolated.
  std::pair<double, double> bracket(const CriticalPoint& cp) const;

  /// Sigma(alpha), or Sigma^K(alpha) when k_fixed.
  std::vector<Triple> sigma(double alpha) const;
  /// Triples in the filtered index set for every alpha.
  std::vector<Triple> background() const;
  /// Product of basic degrees over the triples.
  BurnsideElement rho(const std::vector<Triple>& triples) const;

  LocalInvariant local_invariant(const CriticalPoint& cp, InvariantMode mode) const;

  /// The mode's view of the index set at alpha (background removed in
  /// relative mode).
  std::vector<Triple> sigma_for(double alpha, InvariantMode mode) const;

  FoldingProfile folding_profile(const CriticalPoint& cp, const OrbitType& h,
                                 InvariantMode mode) const;

  /// (-1)^{m^s(alpha-)} i^s x_0 at s = s_max, 0 above it. Requires a nonzero
  /// indicator at s_max; s below s_max is rejected.
  std::int64_t theorem_bounded_coeff(const FoldingProfile& profile, int s) const;
  /// Closed form against the coefficient of (^s H) in the local invariant.
  CoefficientCheck check_bounded(const FoldingProfile& profile, const LocalInvariant& inv,
                                 int s) const;

  std::vector<BranchCertificate> branch_certificates(const CriticalPoint& cp,
                                                     const std::vector<OrbitType>& maximal,
                                                     InvariantMode mode) const;

  GlobalVerdict global_verdict(const OrbitType& h, InvariantMode mode) const;

 private:
  std::shared_ptr<const DegreeCache> degrees_;
  std::vector<EigenvalueCurve> curves_;
  BesselZeroTable table_;
  std::vector<std::int64_t> multiplicities_;
  bool k_fixed_;
  double bracket_width_;
  std::vector<CriticalPoint> critical_;

  mutable std::mutex mutex_;
  mutable std::map<std::vector<Triple>, BurnsideElement> rho_memo_;
};

BurnsideElement rabinowitz_sum(const std::vector<LocalInvariant>& invariants);

/// Maximal types of V_{1,j} over the blocks present in the model, without
/// duplicates, in processing order.
std::vector<OrbitType> maximal_at_one(const AmbientGroup& ambient,
                                      const std::vector<std::size_t>& blocks);

}  // namespace equideg
