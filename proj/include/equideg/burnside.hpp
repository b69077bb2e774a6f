#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "equideg/orbit_types.hpp"

namespace equideg {

/// Element of the Burnside ring A(G): finite integer combination of orbit
/// types with finite Weyl group. Zero coefficients are never stored.
class BurnsideElement {
 public:
  using Terms = std::map<OrbitType, std::int64_t, OrbitTypeLess>;

  BurnsideElement() = default;

  /// The class (G) with coefficient 1.
  static BurnsideElement unit(const AmbientGroup& ambient);
  static BurnsideElement generator(const OrbitType& h, std::int64_t coefficient = 1);

  const Terms& terms() const { return terms_; }
  std::int64_t coeff(const OrbitType& h) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const OrbitType& h, std::int64_t coefficient);

  BurnsideElement& operator+=(const BurnsideElement& other);
  BurnsideElement& operator-=(const BurnsideElement& other);
  friend BurnsideElement operator+(BurnsideElement a, const BurnsideElement& b) { return a += b; }
  friend BurnsideElement operator-(BurnsideElement a, const BurnsideElement& b) { return a -= b; }
  BurnsideElement operator-() const;
  friend BurnsideElement operator*(std::int64_t k, const BurnsideElement& a);
  friend BurnsideElement operator*(const BurnsideElement& a, const BurnsideElement& b);

  bool operator==(const BurnsideElement& other) const { return terms_ == other.terms_; }

  /// (symbol, coefficient) pairs sorted by symbol.
  std::vector<std::pair<std::string, std::int64_t>> serialize() const;
  /// Terms in processing order, e.g. "(G) - 2(D6^Z1 x^V4 S4p) + ...".
  std::string to_string(bool pretty = false) const;

 private:
  Terms terms_;
};

/// (H) * (K) by the recurrence formula; memoized per unordered pair.
BurnsideElement generator_product(const OrbitType& h, const OrbitType& k);

BurnsideElement multiply(const BurnsideElement& a, const BurnsideElement& b);

/// Psi_s applied term by term.
BurnsideElement fold(const BurnsideElement& a, int s);

/// Finite type whose O(2) kernel Z1 is cyclic (contains no reflection).
bool cyclic_kernel(const OrbitType& h);

/// Rewrites an element in the basis where every cyclic-kernel class (H) is
/// replaced by (H)/2, i.e. doubles those coefficients. This is the basis in
/// which |W(H)| is taken modulo the central element (1, -1) for such classes.
BurnsideElement to_listing_basis(const BurnsideElement& a);
BurnsideElement from_listing_basis(const BurnsideElement& a);
/// |W(H)| in the listing basis.
std::int64_t listing_weyl_order(const OrbitType& h);

/// Parses a serialized element against a pool of known orbit types.
BurnsideElement deserialize(const std::vector<std::pair<std::string, std::int64_t>>& terms,
                            const std::vector<OrbitType>& pool);

}  // namespace equideg
