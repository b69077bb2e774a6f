#include "equideg/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "equideg/error.hpp"

namespace equideg {

std::string to_string(InvariantMode mode) {
  return mode == InvariantMode::Full ? "full" : "relative";
}

InvariantMode parse_mode(const std::string& text) {
  if (text == "full") return InvariantMode::Full;
  if (text == "relative") return InvariantMode::Relative;
  throw Error(ErrorCode::SchemaError, "unknown invariant mode '" + text + "'");
}

std::string to_string(Conclusion c) {
  return c == Conclusion::UnboundedBranch ? "UnboundedBranch" : "Inconclusive";
}

BifurcationProblem::BifurcationProblem(std::shared_ptr<const DegreeCache> degrees,
                                       std::vector<EigenvalueCurve> curves, BesselZeroTable table,
                                       std::vector<std::int64_t> multiplicities, bool k_fixed,
                                       double bracket_width)
    : degrees_(std::move(degrees)),
      curves_(std::move(curves)),
      table_(std::move(table)),
      multiplicities_(std::move(multiplicities)),
      k_fixed_(k_fixed),
      bracket_width_(bracket_width) {
  if (!(bracket_width_ > 0)) throw Error(ErrorCode::SchemaError, "bracket width must be positive");
  for (const auto& c : curves_) {
    if (c.j() >= multiplicities_.size()) {
      throw Error(ErrorCode::SchemaError, "curve block without multiplicity");
    }
  }
  critical_ = equideg::critical_points(curves_, table_);
}

std::vector<CriticalPoint> BifurcationProblem::relevant_points() const {
  std::vector<CriticalPoint> out;
  for (const auto& cp : critical_) {
    if (multiplicities_[cp.id.j] % 2 == 0) continue;
    if (k_fixed_ && cp.id.m % 2 == 0) continue;
    out.push_back(cp);
  }
  return out;
}

const CriticalPoint& BifurcationProblem::point(const Triple& id) const {
  for (const auto& cp : critical_) {
    if (cp.id == id) return cp;
  }
  throw Error(ErrorCode::SchemaError, "no critical point " + to_string(id));
}

std::pair<double, double> BifurcationProblem::bracket(const CriticalPoint& cp) const {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& other : critical_) {
    if (other.id == cp.id) continue;
    gap = std::min(gap, std::fabs(other.alpha - cp.alpha));
  }
  if (gap <= 1e-9) {
    throw Error(ErrorCode::NotIsolated, "critical point " + to_string(cp.id) +
                                            " shares its alpha with another crossing");
  }
  const double width = std::min(bracket_width_, gap / 2);
  return {cp.alpha - width, cp.alpha + width};
}

std::vector<Triple> BifurcationProblem::sigma(double alpha) const {
  auto sets = index_sets(curves_, table_, alpha, multiplicities_);
  return k_fixed_ ? sets.sigma_k.triples : sets.sigma.triples;
}

std::vector<Triple> BifurcationProblem::background() const {
  std::vector<Triple> out;
  for (const auto& c : curves_) {
    const auto mult = multiplicities_[c.j()];
    if (mult <= 0 || mult % 2 == 0) continue;
    const double inf = c.codomain().first;
    for (int m = 0; m <= table_.m_max(); ++m) {
      if (k_fixed_ && m % 2 == 0) continue;
      for (int n = 1; n <= table_.n_max() && table_.s(m, n) <= inf; ++n) {
        out.push_back({n, m, c.j()});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Triple> BifurcationProblem::sigma_for(double alpha, InvariantMode mode) const {
  auto all = sigma(alpha);
  if (mode == InvariantMode::Full) return all;
  const auto base = background();
  std::vector<Triple> out;
  std::set_difference(all.begin(), all.end(), base.begin(), base.end(), std::back_inserter(out));
  return out;
}

BurnsideElement BifurcationProblem::rho(const std::vector<Triple>& triples) const {
  {
    std::lock_guard lock(mutex_);
    auto it = rho_memo_.find(triples);
    if (it != rho_memo_.end()) return it->second;
  }
  auto out = BurnsideElement::unit(ambient());
  for (const auto& t : triples) out = out * degrees_->basic_degree({t.m, t.j}).value;
  std::lock_guard lock(mutex_);
  rho_memo_.emplace(triples, out);
  return out;
}

LocalInvariant BifurcationProblem::local_invariant(const CriticalPoint& cp,
                                                   InvariantMode mode) const {
  const auto [lo, hi] = bracket(cp);
  LocalInvariant out;
  out.id = cp.id;
  out.mode = mode;
  out.k_fixed = k_fixed_;
  out.alpha_minus = lo;
  out.alpha_plus = hi;
  out.value = rho(sigma_for(lo, mode)) - rho(sigma_for(hi, mode));
  return out;
}

namespace {

std::map<int, int> count_n(const DegreeCache& degrees, const OrbitType& h,
                           const std::vector<Triple>& side, const std::vector<int>& folds) {
  std::map<int, int> out;
  for (int s : folds) {
    const auto target = fold(h, s);
    int n = 0;
    for (const auto& t : side) {
      if (degrees.basic_degree({t.m, t.j}).value.coeff(target) != 0) ++n;
    }
    out[s] = n;
  }
  return out;
}

std::map<int, int> count_m(const OrbitType& h, const std::vector<Triple>& side,
                           const std::vector<int>& folds, const std::map<int, int>& n) {
  std::map<int, int> out;
  for (int s : folds) {
    const auto low = fold(h, s);
    int count = 0;
    for (const auto& t : side) {
      if (t.m < 1) continue;
      auto it = n.find(t.m);
      if (it == n.end() || it->second % 2 == 0) continue;
      const auto high = fold(h, t.m);
      if (low != high && leq(low, high)) ++count;
    }
    out[s] = count;
  }
  return out;
}

}  // namespace

FoldingProfile BifurcationProblem::folding_profile(const CriticalPoint& cp, const OrbitType& h,
                                                   InvariantMode mode) const {
  const auto [lo, hi] = bracket(cp);
  const auto minus = sigma_for(lo, mode);
  const auto plus = sigma_for(hi, mode);
  std::vector<int> folds;
  for (const auto* side : {&minus, &plus}) {
    for (const auto& t : *side) {
      if (t.m >= 1) folds.push_back(t.m);
    }
  }
  std::sort(folds.begin(), folds.end());
  folds.erase(std::unique(folds.begin(), folds.end()), folds.end());

  FoldingProfile p;
  p.id = cp.id;
  p.h = h;
  p.n_minus = count_n(*degrees_, h, minus, folds);
  p.n_plus = count_n(*degrees_, h, plus, folds);
  p.m_minus = count_m(h, minus, folds, p.n_minus);
  p.m_plus = count_m(h, plus, folds, p.n_plus);
  for (int s : folds) {
    const bool odd_minus = p.n_minus[s] % 2 == 1;
    const bool odd_plus = p.n_plus[s] % 2 == 1;
    int i = 0;
    if (odd_minus && !odd_plus) i = -1;
    if (!odd_minus && odd_plus) i = 1;
    p.indicator[s] = i;
    if (i != 0) p.s_max = std::max(p.s_max, s);
  }
  return p;
}

std::int64_t BifurcationProblem::theorem_bounded_coeff(const FoldingProfile& profile,
                                                       int s) const {
  if (profile.s_max == 0) {
    throw Error(ErrorCode::SchemaError,
                "no folding with a nonzero indicator at " + to_string(profile.id));
  }
  if (s > profile.s_max) return 0;
  if (s < profile.s_max) {
    throw Error(ErrorCode::SchemaError, "closed form only covers s >= s_max");
  }
  const int m = profile.m_minus.at(s);
  const int sign = m % 2 == 0 ? 1 : -1;
  return sign * profile.indicator.at(s) * x0(profile.h);
}

CoefficientCheck BifurcationProblem::check_bounded(const FoldingProfile& profile,
                                                   const LocalInvariant& inv, int s) const {
  CoefficientCheck out;
  out.id = profile.id;
  out.h = profile.h;
  out.s = s;
  out.closed_form = theorem_bounded_coeff(profile, s);
  out.brute_force = inv.value.coeff(fold(profile.h, s));
  return out;
}

std::vector<BranchCertificate> BifurcationProblem::branch_certificates(
    const CriticalPoint& cp, const std::vector<OrbitType>& maximal, InvariantMode mode) const {
  std::vector<BranchCertificate> out;
  const auto inv = local_invariant(cp, mode);
  if (inv.value.is_zero()) return out;
  for (const auto& h : maximal) {
    const auto profile = folding_profile(cp, h, mode);
    if (profile.s_max == 0) continue;
    const auto symmetry = fold(h, profile.s_max);
    const auto c = inv.value.coeff(symmetry);
    if (c == 0) continue;
    std::ostringstream text;
    text << "branch of non-radial solutions bifurcating from (alpha=" << cp.alpha
         << ", 0) with symmetries at least " << symbol(symmetry);
    out.push_back({cp.id, cp.alpha, h, profile.s_max, symmetry, c, text.str()});
  }
  return out;
}

GlobalVerdict BifurcationProblem::global_verdict(const OrbitType& h, InvariantMode mode) const {
  GlobalVerdict v;
  v.h = h;
  std::vector<std::pair<Triple, int>> folds;
  for (const auto& cp : relevant_points()) {
    const auto p = folding_profile(cp, h, mode);
    folds.emplace_back(cp.id, p.s_max);
    v.s_bar = std::max(v.s_bar, p.s_max);
  }
  if (v.s_bar == 0) return v;
  for (const auto& [id, s] : folds) {
    if (s == v.s_bar) v.members.push_back(id);
  }
  if (v.members.size() % 2 == 1) {
    v.conclusion = Conclusion::UnboundedBranch;
    v.alternative = "unbounded branch of non-radial solutions with symmetries at least " +
                    symbol(fold(h, v.s_bar)) +
                    "; for some M > 0 it meets every regular level alpha > M, or every regular "
                    "level alpha < -M";
  }
  return v;
}

BurnsideElement rabinowitz_sum(const std::vector<LocalInvariant>& invariants) {
  BurnsideElement out;
  for (const auto& inv : invariants) out += inv.value;
  return out;
}

std::vector<OrbitType> maximal_at_one(const AmbientGroup& ambient,
                                      const std::vector<std::size_t>& blocks) {
  std::vector<OrbitType> out;
  for (auto j : blocks) {
    for (const auto& h : maximal_types(ambient, {1, j})) out.push_back(h);
  }
  std::sort(out.begin(), out.end(), OrbitTypeLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace equideg
