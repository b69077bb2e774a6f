#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "equideg/finite_group.hpp"

namespace equideg {

/// Angles are stored as numerators over a fixed denominator, in full turns.
inline constexpr std::int64_t kAngleDenominator = 1024LL * 729 * 125 * 49 * 11;

/// Element (x, y) of O(2) x Gamma'. x is the rotation r_a (reflection = false)
/// or s_a = r_a * kappa (reflection = true), with a = angle / kAngleDenominator.
struct GElement {
  std::int64_t angle = 0;
  bool reflection = false;
  std::uint32_t gamma = 0;

  bool operator==(const GElement&) const = default;
};

std::uint64_t pack(const GElement& e);
GElement unpack(std::uint64_t packed);

/// Converts p/q turns into a numerator over kAngleDenominator; throws if q
/// does not divide the denominator.
std::int64_t angle_of(std::int64_t p, std::int64_t q);

/// (W_m, V_j^-) index of an irreducible representation of O(2) x Gamma'.
struct IrrepLabel {
  int m = 0;
  std::size_t j = 0;

  auto operator<=>(const IrrepLabel&) const = default;
};

struct SubgroupName {
  std::string name;
  std::vector<std::string> generators;  // cycle notation on Gamma'
};

class AmbientGroup;
struct OrbitTypeData;

/// Conjugacy class of a closed subgroup of O(2) x Gamma' with finite Weyl
/// group. Either a finite subgroup containing a reflection, or O(2) x K.
/// Instances are interned by their AmbientGroup; equality is identity.
class OrbitType {
 public:
  OrbitType() = default;
  explicit OrbitType(const OrbitTypeData* data) : data_(data) {}

  const OrbitTypeData& data() const { return *data_; }
  const AmbientGroup& ambient() const;
  bool valid() const { return data_ != nullptr; }

  bool is_o2() const;
  /// |H| for finite types, |K| for O(2) x K.
  std::size_t order() const;

  bool operator==(const OrbitType& other) const { return data_ == other.data_; }
  bool operator!=(const OrbitType& other) const { return data_ != other.data_; }

 private:
  const OrbitTypeData* data_ = nullptr;
};

/// Total order used for storage and processing: O(2) types first, then larger
/// finite types first. Every strict containment (L) < (H) has H before L.
struct OrbitTypeLess {
  bool operator()(const OrbitType& a, const OrbitType& b) const;
};

struct O2Part {
  enum class Kind { Z, D, SO2, O2 };
  Kind kind = Kind::Z;
  int k = 1;

  bool operator==(const O2Part&) const = default;
};

std::string to_string(const O2Part& p);

/// Goursat data (K1, Z1, K2, Z2) of a subgroup of O(2) x Gamma'. Class indices
/// refer to AmbientGroup::subgroup_classes().
struct Amalgam {
  O2Part k1;
  O2Part z1;
  std::size_t k2 = 0;
  std::size_t z2 = 0;
};

struct OrbitTypeData {
  const AmbientGroup* ambient = nullptr;
  bool o2 = false;
  std::vector<std::uint64_t> elements;   // canonical, sorted (finite types)
  Subgroup gamma_subgroup;               // canonical K (O(2) types)
  std::vector<std::int64_t> reflection_angles;  // distinct, sorted
  std::size_t rotation_count = 0;
  std::int64_t weyl = 0;
  Amalgam amalgam;
  std::string symbol;
  std::string pretty;
};

/// O(2) x Gamma' with Gamma' = Gamma x Z2, Z2 acting as -Id on every V_j^-.
/// Owns the interning table of orbit types and all memo tables.
class AmbientGroup {
 public:
  static std::shared_ptr<const AmbientGroup> create(FiniteGroup gamma, CharacterTable table,
                                                    const std::vector<SubgroupName>& names);

  AmbientGroup(const AmbientGroup&) = delete;
  AmbientGroup& operator=(const AmbientGroup&) = delete;

  const FiniteGroup& gamma() const { return *gamma_; }
  const FiniteGroup& gamma_prime() const { return *gamma_prime_; }
  const CharacterTable& table() const { return table_; }
  std::uint32_t antipode() const { return antipode_; }
  std::uint32_t gamma_part(std::uint32_t g) const { return gamma_part_[g]; }
  int sign(std::uint32_t g) const { return sign_[g]; }
  std::uint32_t exponent() const { return exponent_; }

  const std::vector<SubgroupClass>& subgroup_classes() const { return classes_; }
  std::size_t class_of(const Subgroup& k) const;
  /// Class index by display name, if unique.
  std::optional<std::size_t> class_by_name(const std::string& name) const;

  std::size_t irrep_count() const { return table_.size(); }
  int irrep_dim(std::size_t j) const;
  /// chi_j(gamma) * sign for an element of Gamma'.
  double irrep_character(std::size_t j, std::uint32_t g) const;
  /// Orthogonal matrices of V_j^- for every element of Gamma'.
  const std::vector<Eigen::MatrixXd>& irrep_matrices(std::size_t j) const;

  /// Interns the class of a finite subgroup given as a full element list.
  OrbitType intern(std::vector<std::uint64_t> elements) const;
  OrbitType intern_o2(const Subgroup& k) const;
  /// The class (G) = O(2) x Gamma'.
  OrbitType unit() const;

  // Memo tables, internally synchronized.
  std::optional<std::int64_t> cached_n(const OrbitTypeData* l, const OrbitTypeData* h) const;
  void store_n(const OrbitTypeData* l, const OrbitTypeData* h, std::int64_t value) const;

  using ProductTerms = std::vector<std::pair<const OrbitTypeData*, std::int64_t>>;
  std::optional<ProductTerms> cached_product(const OrbitTypeData* a, const OrbitTypeData* b) const;
  void store_product(const OrbitTypeData* a, const OrbitTypeData* b, ProductTerms value) const;

 private:
  AmbientGroup() = default;
  void finish_data(OrbitTypeData& d) const;

  std::shared_ptr<const FiniteGroup> gamma_;
  std::shared_ptr<const FiniteGroup> gamma_prime_;
  CharacterTable table_;
  std::uint32_t antipode_ = 0;
  std::vector<std::uint32_t> gamma_part_;
  std::vector<int> sign_;
  std::uint32_t exponent_ = 1;
  std::vector<SubgroupClass> classes_;
  std::vector<std::vector<std::uint32_t>> class_keys_;

  mutable std::mutex mutex_;
  mutable std::map<std::vector<std::uint64_t>, std::unique_ptr<OrbitTypeData>> finite_types_;
  mutable std::map<std::vector<std::uint32_t>, std::unique_ptr<OrbitTypeData>> o2_types_;
  mutable std::map<std::size_t, std::vector<Eigen::MatrixXd>> irrep_matrices_;
  mutable std::map<std::pair<const OrbitTypeData*, const OrbitTypeData*>, std::int64_t> n_memo_;
  mutable std::map<std::pair<const OrbitTypeData*, const OrbitTypeData*>, ProductTerms>
      product_memo_;
};

/// The bundled Gamma = S4 with its character table and the S4 x Z2 names.
std::shared_ptr<const AmbientGroup> s4_ambient();
FiniteGroup s4_group();
CharacterTable s4_character_table(const FiniteGroup& s4);
std::vector<SubgroupName> s4z2_subgroup_names();

/// O(2) x Gamma' multiplication.
GElement multiply(const GElement& a, const GElement& b, const FiniteGroup& gamma_prime);

/// Element list of the canonical representative with all reflection angles
/// shifted by `offset` (a conjugation by a rotation).
std::vector<GElement> elements_of(const OrbitType& h, std::int64_t offset = 0);

std::int64_t weyl_order(const OrbitType& h);
/// Number of conjugates of h containing a fixed representative of l.
std::int64_t n_count(const OrbitType& l, const OrbitType& h);
bool leq(const OrbitType& l, const OrbitType& h);

/// Classes (with finite Weyl group) of H intersected with conjugates of K.
std::vector<OrbitType> intersection_types(const OrbitType& h, const OrbitType& k);

/// Same quantities computed by brute force in the finite truncation
/// D_N x Gamma' (conjugators restricted to D_N x Gamma').
std::int64_t n_truncated(const OrbitType& l, const OrbitType& h, std::int64_t n);
std::int64_t weyl_truncated(const OrbitType& h, std::int64_t n);
/// 4 * lcm of the rotation orders involved.
std::int64_t truncation_level(const OrbitType& l, const OrbitType& h);
/// n(l, h) at N and 2N must agree with each other and with n_count; throws
/// StabilizationFailure otherwise.
std::int64_t n_stabilized(const OrbitType& l, const OrbitType& h);

/// Preimage under psi_s(r_a) = r_{sa}, psi_s(s_a) = s_{sa}.
OrbitType fold(const OrbitType& h, int s);

/// dim (W_m (x) V_j^-)^H by character averaging.
int fixed_dim(const OrbitType& h, const IrrepLabel& irrep);

/// Isotropy classes (with finite Weyl group) of nonzero vectors of V_{m,j}.
std::vector<OrbitType> orbit_types(const AmbientGroup& ambient, const IrrepLabel& irrep);
std::vector<OrbitType> maximal_types(const AmbientGroup& ambient, const IrrepLabel& irrep);

/// Matrix of (x, y) on W_m (x) V_j^-.
Eigen::MatrixXd irrep_matrix(const AmbientGroup& ambient, const IrrepLabel& irrep,
                             const GElement& g);

const Amalgam& amalgam(const OrbitType& h);
/// ASCII form "(D6^Z3 x^V4 D4p)"; O(2) types render as "(O2 x K)".
const std::string& symbol(const OrbitType& h);
/// Unicode form "(D₆^{ℤ₃}×^{V₄}D₄ᵖ)".
const std::string& pretty_symbol(const OrbitType& h);

/// Parsed ASCII amalgam symbol; subgroup names are kept as strings.
struct ParsedSymbol {
  O2Part k1;
  O2Part z1;
  std::string k2;
  std::string z2;
};

ParsedSymbol parse_symbol(const std::string& text);
/// Looks a symbol up among the given types; throws UnknownSymbol when no type
/// or more than one type matches.
OrbitType resolve_symbol(const std::string& text, const std::vector<OrbitType>& pool);

}  // namespace equideg
