#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace equideg {

using Rational = boost::rational<std::int64_t>;

/// Bijection of {0, ..., degree-1}. Products compose right to left:
/// (a * b)(x) = a(b(x)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t degree);

  /// Parses 1-based cycle notation such as "(1,2)(3,4)" or "(1 2 3)". "()" is
  /// the identity.
  static Permutation parse_cycles(std::string_view text, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator()(std::uint32_t point) const { return images_[point]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  bool is_identity() const;

  /// 1-based cycle notation, "()" for the identity.
  std::string to_cycles() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

/// Subgroup of a FiniteGroup, stored as the sorted list of member indices.
struct Subgroup {
  std::vector<std::uint32_t> members;

  std::size_t order() const { return members.size(); }
  bool contains(std::uint32_t element) const;
  bool operator==(const Subgroup&) const = default;
};

struct SubgroupClass {
  Subgroup representative;
  std::size_t class_size = 1;
  std::string name;
};

/// Finite permutation group with every element enumerated.
class FiniteGroup {
 public:
  static constexpr std::size_t kDefaultElementCap = 1'000'000;

  static FiniteGroup from_generators(std::size_t degree, std::vector<Permutation> generators,
                                     std::size_t element_cap = kDefaultElementCap);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  std::uint32_t identity() const { return 0; }

  const Permutation& element(std::uint32_t index) const { return elements_[index]; }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  /// Index of the element reached from the identity by generator g, for every
  /// generator, in the order of generators().
  const std::vector<std::uint32_t>& generator_indices() const { return generator_indices_; }

  std::optional<std::uint32_t> find(const Permutation& p) const;
  std::uint32_t index_of(const Permutation& p) const;

  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  /// g x g^-1
  std::uint32_t conjugate(std::uint32_t g, std::uint32_t x) const;
  std::uint32_t element_order(std::uint32_t a) const;
  /// Least common multiple of all element orders.
  std::uint32_t exponent() const;

  /// Conjugacy classes of elements; class 0 holds the identity.
  const std::vector<std::vector<std::uint32_t>>& conjugacy_classes() const { return classes_; }
  std::uint32_t class_of(std::uint32_t element) const { return class_of_[element]; }

  /// Breadth-first spanning tree over the Cayley graph: for every element other
  /// than the identity, (parent, generator position) with
  /// element = parent * generator.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& cayley_tree() const { return tree_; }

 private:
  FiniteGroup() = default;
  void build_tables();

  std::size_t degree_ = 0;
  std::vector<Permutation> generators_;
  std::vector<std::uint32_t> generator_indices_;
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, std::uint32_t, PermutationHash> index_;
  std::vector<std::uint32_t> table_;  // empty when the group is too large
  std::vector<std::uint32_t> inverse_;
  std::vector<std::vector<std::uint32_t>> classes_;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> tree_;
};

/// Group on the disjoint union of both domains; order |g1|*|g2|.
FiniteGroup direct_product(const FiniteGroup& g1, const FiniteGroup& g2,
                           std::size_t element_cap = FiniteGroup::kDefaultElementCap);

Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup whole_group(const FiniteGroup& g);
Subgroup generate_subgroup(const FiniteGroup& g, std::span<const std::uint32_t> generators);
/// Validates closure; throws NotASubgroup.
Subgroup make_subgroup(const FiniteGroup& g, std::vector<std::uint32_t> members);
bool is_subgroup_of(const Subgroup& h, const Subgroup& k);
Subgroup conjugate(const FiniteGroup& g, const Subgroup& h, std::uint32_t x);
Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);
/// Lexicographically least conjugate of h; equal keys iff conjugate.
std::vector<std::uint32_t> canonical_key(const FiniteGroup& g, const Subgroup& h);
bool are_conjugate(const FiniteGroup& g, const Subgroup& h, const Subgroup& k);
/// Normal subgroups of h (as subgroups of g).
std::vector<Subgroup> normal_subgroups(const FiniteGroup& g, const Subgroup& h);

std::size_t weyl_order(const FiniteGroup& g, const Subgroup& h);

/// Conjugacy classes of subgroups, sorted by (order, class size).
std::vector<SubgroupClass> subgroup_classes(const FiniteGroup& g, std::size_t order_cap = 10'000);

/// Number of subgroups in the class of k that contain h.
std::size_t n_count(const FiniteGroup& g, const Subgroup& h, const SubgroupClass& k);

/// Index into `classes` of the class containing h.
std::size_t class_index(const FiniteGroup& g, const std::vector<SubgroupClass>& classes,
                        const Subgroup& h);

// ---------------------------------------------------------------------------

struct CharacterTable {
  std::vector<std::uint32_t> class_representatives;
  std::vector<std::size_t> class_sizes;
  std::vector<std::string> labels;
  /// characters[i][c]: value of chi_i on table class c.
  std::vector<std::vector<Rational>> characters;
  /// Table column for every group element.
  std::vector<std::uint32_t> element_column;

  std::size_t size() const { return characters.size(); }
  std::int64_t degree(std::size_t irrep) const;
  Rational value(std::size_t irrep, std::uint32_t element) const;
};

/// Builds a table from class representatives (cycle notation) and rational
/// rows; checks class coverage and row orthogonality.
CharacterTable make_character_table(const FiniteGroup& g,
                                    const std::vector<std::string>& representatives,
                                    std::vector<std::string> labels,
                                    std::vector<std::vector<Rational>> rows);

/// Linear orthogonal representation of a finite group, with a matrix stored
/// for every element.
class OrthogonalAction {
 public:
  OrthogonalAction(std::shared_ptr<const FiniteGroup> group,
                   const std::vector<Eigen::MatrixXd>& generator_matrices);

  const FiniteGroup& group() const { return *group_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return group_; }
  std::size_t dimension() const { return dimension_; }
  const Eigen::MatrixXd& matrix(std::uint32_t element) const { return matrices_[element]; }
  double trace(std::uint32_t element) const { return matrices_[element].trace(); }

 private:
  std::shared_ptr<const FiniteGroup> group_;
  std::size_t dimension_ = 0;
  std::vector<Eigen::MatrixXd> matrices_;
};

/// Permutation matrix of p acting on coordinates: e_i -> e_{p(i)}.
Eigen::MatrixXd permutation_matrix(const Permutation& p);

struct IsotypicMultiplicity {
  std::size_t irrep;
  std::string label;
  std::int64_t multiplicity;
};

std::vector<IsotypicMultiplicity> isotypic_decompose(const OrthogonalAction& action,
                                                     const CharacterTable& table);

/// dim V^h, by averaging traces over h.
int fixed_dim(const OrthogonalAction& action, const Subgroup& h);

}  // namespace equideg
