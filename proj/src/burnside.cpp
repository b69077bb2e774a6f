#include "equideg/burnside.hpp"

#include <algorithm>
#include <sstream>

#include "equideg/error.hpp"

namespace equideg {

BurnsideElement BurnsideElement::unit(const AmbientGroup& ambient) {
  return generator(ambient.unit());
}

BurnsideElement BurnsideElement::generator(const OrbitType& h, std::int64_t coefficient) {
  BurnsideElement out;
  out.add(h, coefficient);
  return out;
}

std::int64_t BurnsideElement::coeff(const OrbitType& h) const {
  auto it = terms_.find(h);
  return it == terms_.end() ? 0 : it->second;
}

void BurnsideElement::add(const OrbitType& h, std::int64_t coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(h, coefficient);
  if (inserted) return;
  it->second += coefficient;
  if (it->second == 0) terms_.erase(it);
}

BurnsideElement& BurnsideElement::operator+=(const BurnsideElement& other) {
  for (const auto& [h, c] : other.terms_) add(h, c);
  return *this;
}

BurnsideElement& BurnsideElement::operator-=(const BurnsideElement& other) {
  for (const auto& [h, c] : other.terms_) add(h, -c);
  return *this;
}

BurnsideElement BurnsideElement::operator-() const {
  BurnsideElement out = *this;
  for (auto& [h, c] : out.terms_) c = -c;
  return out;
}

BurnsideElement operator*(std::int64_t k, const BurnsideElement& a) {
  BurnsideElement out;
  if (k == 0) return out;
  out = a;
  for (auto& [h, c] : out.terms_) c *= k;
  return out;
}

BurnsideElement operator*(const BurnsideElement& a, const BurnsideElement& b) {
  return multiply(a, b);
}

std::vector<std::pair<std::string, std::int64_t>> BurnsideElement::serialize() const {
  std::vector<std::pair<std::string, std::int64_t>> out;
  for (const auto& [h, c] : terms_) out.emplace_back(symbol(h), c);
  std::sort(out.begin(), out.end());
  return out;
}

std::string BurnsideElement::to_string(bool pretty) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [h, c] : terms_) {
    std::int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag;
    os << (pretty ? pretty_symbol(h) : symbol(h));
    first = false;
  }
  return os.str();
}

BurnsideElement generator_product(const OrbitType& h, const OrbitType& k) {
  const auto& amb = h.ambient();
  BurnsideElement out;
  if (auto cached = amb.cached_product(&h.data(), &k.data())) {
    for (const auto& [d, c] : *cached) out.add(OrbitType(d), c);
    return out;
  }
  const auto unit = amb.unit();
  if (h == unit || k == unit) {
    out.add(h == unit ? k : h, 1);
  } else {
    const std::int64_t wh = weyl_order(h);
    const std::int64_t wk = weyl_order(k);
    // Candidates sorted so that every strict supergroup precedes its subgroups.
    auto candidates = intersection_types(h, k);
    std::vector<std::pair<OrbitType, std::int64_t>> done;
    for (const auto& l : candidates) {
      std::int64_t value = n_count(l, h) * wh * n_count(l, k) * wk;
      for (const auto& [lt, c] : done) {
        value -= c * n_count(l, lt) * weyl_order(lt);
      }
      const std::int64_t wl = weyl_order(l);
      if (value % wl != 0) {
        throw Error(ErrorCode::NonIntegralCoefficient,
                    "product coefficient of " + symbol(l) + " is not an integer");
      }
      value /= wl;
      if (value != 0) done.emplace_back(l, value);
    }
    for (const auto& [l, c] : done) out.add(l, c);
  }
  AmbientGroup::ProductTerms memo;
  for (const auto& [t, c] : out.terms()) memo.emplace_back(&t.data(), c);
  amb.store_product(&h.data(), &k.data(), std::move(memo));
  return out;
}

BurnsideElement multiply(const BurnsideElement& a, const BurnsideElement& b) {
  BurnsideElement out;
  for (const auto& [h, ch] : a.terms()) {
    for (const auto& [k, ck] : b.terms()) {
      out += (ch * ck) * generator_product(h, k);
    }
  }
  return out;
}

BurnsideElement fold(const BurnsideElement& a, int s) {
  BurnsideElement out;
  for (const auto& [h, c] : a.terms()) out.add(fold(h, s), c);
  return out;
}

bool cyclic_kernel(const OrbitType& h) {
  return !h.is_o2() && amalgam(h).z1.kind == O2Part::Kind::Z;
}

BurnsideElement to_listing_basis(const BurnsideElement& a) {
  BurnsideElement out;
  for (const auto& [h, c] : a.terms()) out.add(h, cyclic_kernel(h) ? 2 * c : c);
  return out;
}

BurnsideElement from_listing_basis(const BurnsideElement& a) {
  BurnsideElement out;
  for (const auto& [h, c] : a.terms()) {
    if (cyclic_kernel(h) && c % 2 != 0) {
      throw Error(ErrorCode::NonIntegralCoefficient,
                  "odd listing coefficient on " + symbol(h));
    }
    out.add(h, cyclic_kernel(h) ? c / 2 : c);
  }
  return out;
}

std::int64_t listing_weyl_order(const OrbitType& h) {
  return cyclic_kernel(h) ? weyl_order(h) / 2 : weyl_order(h);
}

BurnsideElement deserialize(const std::vector<std::pair<std::string, std::int64_t>>& terms,
                            const std::vector<OrbitType>& pool) {
  BurnsideElement out;
  for (const auto& [sym, c] : terms) out.add(resolve_symbol(sym, pool), c);
  return out;
}

}  // namespace equideg
