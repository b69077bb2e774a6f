#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "equideg/burnside.hpp"

namespace equideg {

struct BasicDegree {
  IrrepLabel irrep;
  BurnsideElement value;
};

/// Eigenvalue index (n, m, j): n-th Bessel zero of J_m on isotypic block j.
struct Triple {
  int n = 1;
  int m = 0;
  std::size_t j = 0;

  auto operator<=>(const Triple&) const = default;
};

/// deg_V = G-deg(-id, B(V)) computed directly at (m, j) by the recurrence
/// over orbit_types(V) and (G).
BurnsideElement basic_degree_direct(const AmbientGroup& ambient, const IrrepLabel& irrep);

/// Basic degrees per (m, j), computed at m = 1 and folded for m > 1.
/// Internally synchronized.
class DegreeCache {
 public:
  explicit DegreeCache(std::shared_ptr<const AmbientGroup> ambient);

  const AmbientGroup& ambient() const { return *ambient_; }
  BasicDegree basic_degree(const IrrepLabel& irrep) const;

  /// Product of deg_{V_{m,j}} over the triples whose isotypic multiplicity
  /// is odd; the empty product is (G).
  BurnsideElement degree_of_linearization(const std::vector<Triple>& triples,
                                          const std::vector<std::int64_t>& multiplicities) const;

 private:
  std::shared_ptr<const AmbientGroup> ambient_;
  mutable std::mutex mutex_;
  mutable std::map<IrrepLabel, BurnsideElement> cache_;
};

/// x_0 = 2 / |W(H)|; throws InfiniteWeyl unless |W(H)| is 1 or 2.
int x0(const OrbitType& h);

/// Closed-form coefficient of (^sH) in the product of deg_{V_{s,j}} over js:
/// -(x_0/2)(1 - (-1)^{sum dim V_{1,j}^H}). h is the unfolded type.
std::int64_t coeff_fast_formula(const OrbitType& h, const std::vector<std::size_t>& js);

/// coeff_fast_formula checked against the multiplied product; throws
/// CrossCheckMismatch on disagreement.
std::int64_t coeff_fast(const DegreeCache& degrees, const OrbitType& h, int s,
                        const std::vector<std::size_t>& js);

}  // namespace equideg
