#include "equideg/degrees.hpp"

#include <algorithm>

#include "equideg/error.hpp"

namespace equideg {

BurnsideElement basic_degree_direct(const AmbientGroup& ambient, const IrrepLabel& irrep) {
  auto types = orbit_types(ambient, irrep);
  types.push_back(ambient.unit());
  std::sort(types.begin(), types.end(), OrbitTypeLess{});
  types.erase(std::unique(types.begin(), types.end()), types.end());

  BurnsideElement out;
  std::vector<std::pair<OrbitType, std::int64_t>> done;
  for (const auto& h : types) {
    const int dim = h == ambient.unit() ? 0 : fixed_dim(h, irrep);
    std::int64_t value = dim % 2 == 0 ? 1 : -1;
    for (const auto& [k, c] : done) value -= c * n_count(h, k) * weyl_order(k);
    const std::int64_t w = weyl_order(h);
    if (value % w != 0) {
      throw Error(ErrorCode::NonIntegralCoefficient,
                  "basic degree coefficient of " + symbol(h) + " is not an integer");
    }
    value /= w;
    if (value != 0) {
      done.emplace_back(h, value);
      out.add(h, value);
    }
  }
  return out;
}

DegreeCache::DegreeCache(std::shared_ptr<const AmbientGroup> ambient)
    : ambient_(std::move(ambient)) {}

BasicDegree DegreeCache::basic_degree(const IrrepLabel& irrep) const {
  if (irrep.m < 0 || irrep.j >= ambient_->irrep_count()) {
    throw Error(ErrorCode::SchemaError, "irreducible representation index out of range");
  }
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(irrep);
    if (it != cache_.end()) return {irrep, it->second};
  }
  BurnsideElement value;
  if (irrep.m <= 1) {
    value = basic_degree_direct(*ambient_, irrep);
  } else {
    value = fold(basic_degree({1, irrep.j}).value, irrep.m);
  }
  std::lock_guard lock(mutex_);
  cache_.emplace(irrep, value);
  return {irrep, value};
}

BurnsideElement DegreeCache::degree_of_linearization(
    const std::vector<Triple>& triples, const std::vector<std::int64_t>& multiplicities) const {
  auto out = BurnsideElement::unit(*ambient_);
  for (const auto& t : triples) {
    if (t.j >= multiplicities.size()) {
      throw Error(ErrorCode::SchemaError, "isotypic index without multiplicity");
    }
    if (multiplicities[t.j] % 2 == 0) continue;
    out = out * basic_degree({t.m, t.j}).value;
  }
  return out;
}

int x0(const OrbitType& h) {
  const auto w = weyl_order(h);
  if (w != 1 && w != 2) {
    throw Error(ErrorCode::InfiniteWeyl, "x_0 needs |W(H)| in {1, 2}, got " + std::to_string(w));
  }
  return static_cast<int>(2 / w);
}

std::int64_t coeff_fast_formula(const OrbitType& h, const std::vector<std::size_t>& js) {
  int total = 0;
  for (auto j : js) total += fixed_dim(h, {1, j});
  return total % 2 == 0 ? 0 : -x0(h);
}

std::int64_t coeff_fast(const DegreeCache& degrees, const OrbitType& h, int s,
                        const std::vector<std::size_t>& js) {
  const auto fast = coeff_fast_formula(h, js);
  auto product = BurnsideElement::unit(degrees.ambient());
  for (auto j : js) product = product * degrees.basic_degree({s, j}).value;
  const auto brute = product.coeff(fold(h, s));
  if (fast != brute) {
    throw Error(ErrorCode::CrossCheckMismatch,
                "closed form gives " + std::to_string(fast) + " for " + symbol(fold(h, s)) +
                    ", product gives " + std::to_string(brute));
  }
  return brute;
}

}  // namespace equideg
