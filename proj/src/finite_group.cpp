#include "equideg/finite_group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "equideg/error.hpp"

namespace equideg {

namespace {

constexpr std::size_t kTableLimit = 4096;

}  // namespace

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto v : images_) {
    if (v >= images_.size() || seen[v]) {
      throw Error(ErrorCode::NonPermutationInput, "image list is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  return Permutation(std::move(images));
}

Permutation Permutation::parse_cycles(std::string_view text, std::size_t degree) {
  std::vector<std::uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(degree, false);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::NonPermutationInput,
                "bad cycle notation '" + std::string(text) + "': " + why);
  };
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (pos == text.size()) fail("empty");
  while (pos < text.size()) {
    if (text[pos] != '(') fail("expected '('");
    ++pos;
    std::vector<std::uint32_t> cycle;
    for (;;) {
      skip_space();
      if (pos >= text.size()) fail("unterminated cycle");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) fail("unexpected character");
      std::size_t value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        if (value > degree) fail("point out of range");
        ++pos;
      }
      if (value == 0) fail("points are 1-based");
      cycle.push_back(static_cast<std::uint32_t>(value - 1));
    }
    for (auto p : cycle) {
      if (used[p]) fail("point repeated");
      used[p] = true;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      images[cycle[i]] = cycle[(i + 1) % cycle.size()];
    }
    skip_space();
  }
  return Permutation(std::move(images));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (rhs.degree() != degree()) {
    throw Error(ErrorCode::NonPermutationInput, "degree mismatch in product");
  }
  std::vector<std::uint32_t> out(images_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = images_[rhs.images_[i]];
  Permutation p;
  p.images_ = std::move(out);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> out(images_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[images_[i]] = static_cast<std::uint32_t>(i);
  Permutation p;
  p.images_ = std::move(out);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

std::string Permutation::to_cycles() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
      j = images_[j];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : p.images()) h = (h ^ v) * 1099511628211ull;
  return h;
}

bool Subgroup::contains(std::uint32_t element) const {
  return std::binary_search(members.begin(), members.end(), element);
}

// ---------------------------------------------------------------------------

FiniteGroup FiniteGroup::from_generators(std::size_t degree, std::vector<Permutation> generators,
                                         std::size_t element_cap) {
  for (const auto& g : generators) {
    if (g.degree() != degree) {
      throw Error(ErrorCode::NonPermutationInput, "generator degree mismatch");
    }
  }
  FiniteGroup g;
  g.degree_ = degree;
  g.generators_ = std::move(generators);
  g.elements_.push_back(Permutation::identity(degree));
  g.index_.emplace(g.elements_[0], 0);
  g.tree_.emplace_back(0, 0);
  for (std::size_t head = 0; head < g.elements_.size(); ++head) {
    for (std::size_t k = 0; k < g.generators_.size(); ++k) {
      Permutation next = g.elements_[head] * g.generators_[k];
      if (g.index_.count(next)) continue;
      if (g.elements_.size() >= element_cap) {
        throw Error(ErrorCode::ClosureCapExceeded,
                    "group exceeds " + std::to_string(element_cap) + " elements");
      }
      g.index_.emplace(next, static_cast<std::uint32_t>(g.elements_.size()));
      g.elements_.push_back(std::move(next));
      g.tree_.emplace_back(static_cast<std::uint32_t>(head), static_cast<std::uint32_t>(k));
    }
  }
  for (const auto& gen : g.generators_) g.generator_indices_.push_back(g.index_.at(gen));
  g.build_tables();
  return g;
}

void FiniteGroup::build_tables() {
  const std::size_t n = elements_.size();
  if (n <= kTableLimit) {
    table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        table_[a * n + b] = index_.at(elements_[a] * elements_[b]);
      }
    }
  }
  inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a) inverse_[a] = index_.at(elements_[a].inverse());

  class_of_.assign(n, static_cast<std::uint32_t>(-1));
  for (std::uint32_t a = 0; a < n; ++a) {
    if (class_of_[a] != static_cast<std::uint32_t>(-1)) continue;
    auto id = static_cast<std::uint32_t>(classes_.size());
    std::vector<std::uint32_t> cls{a};
    class_of_[a] = id;
    for (std::size_t head = 0; head < cls.size(); ++head) {
      for (auto gi : generator_indices_) {
        auto c = conjugate(gi, cls[head]);
        if (class_of_[c] == static_cast<std::uint32_t>(-1)) {
          class_of_[c] = id;
          cls.push_back(c);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    classes_.push_back(std::move(cls));
  }
}

std::optional<std::uint32_t> FiniteGroup::find(const Permutation& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FiniteGroup::index_of(const Permutation& p) const {
  auto found = find(p);
  if (!found) throw Error(ErrorCode::NotASubgroup, "permutation " + p.to_cycles() + " not in group");
  return *found;
}

std::uint32_t FiniteGroup::multiply(std::uint32_t a, std::uint32_t b) const {
  if (!table_.empty()) return table_[a * elements_.size() + b];
  return index_.at(elements_[a] * elements_[b]);
}

std::uint32_t FiniteGroup::conjugate(std::uint32_t g, std::uint32_t x) const {
  return multiply(multiply(g, x), inverse(g));
}

std::uint32_t FiniteGroup::element_order(std::uint32_t a) const {
  std::uint32_t k = 1;
  for (std::uint32_t x = a; x != 0; x = multiply(x, a)) ++k;
  return k;
}

std::uint32_t FiniteGroup::exponent() const {
  std::uint32_t e = 1;
  for (const auto& cls : classes_) e = std::lcm(e, element_order(cls.front()));
  return e;
}

FiniteGroup direct_product(const FiniteGroup& g1, const FiniteGroup& g2, std::size_t element_cap) {
  const std::size_t d1 = g1.degree();
  const std::size_t d = d1 + g2.degree();
  std::vector<Permutation> gens;
  for (const auto& p : g1.generators()) {
    std::vector<std::uint32_t> im(d);
    std::iota(im.begin(), im.end(), 0u);
    for (std::size_t i = 0; i < d1; ++i) im[i] = p(static_cast<std::uint32_t>(i));
    gens.emplace_back(std::move(im));
  }
  for (const auto& p : g2.generators()) {
    std::vector<std::uint32_t> im(d);
    std::iota(im.begin(), im.end(), 0u);
    for (std::size_t i = 0; i < g2.degree(); ++i) {
      im[d1 + i] = static_cast<std::uint32_t>(d1 + p(static_cast<std::uint32_t>(i)));
    }
    gens.emplace_back(std::move(im));
  }
  return FiniteGroup::from_generators(d, std::move(gens), element_cap);
}

// ---------------------------------------------------------------------------

Subgroup trivial_subgroup(const FiniteGroup&) { return Subgroup{{0}}; }

Subgroup whole_group(const FiniteGroup& g) {
  Subgroup h;
  h.members.resize(g.order());
  std::iota(h.members.begin(), h.members.end(), 0u);
  return h;
}

Subgroup generate_subgroup(const FiniteGroup& g, std::span<const std::uint32_t> generators) {
  std::vector<bool> in(g.order(), false);
  std::vector<std::uint32_t> members{0};
  in[0] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (auto s : generators) {
      auto x = g.multiply(members[head], s);
      if (!in[x]) {
        in[x] = true;
        members.push_back(x);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return Subgroup{std::move(members)};
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<std::uint32_t> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || members.front() != 0) {
    throw Error(ErrorCode::NotASubgroup, "identity missing");
  }
  for (auto m : members) {
    if (m >= g.order()) throw Error(ErrorCode::NotASubgroup, "element index out of range");
  }
  Subgroup h{std::move(members)};
  for (auto a : h.members) {
    for (auto b : h.members) {
      if (!h.contains(g.multiply(a, b))) {
        throw Error(ErrorCode::NotASubgroup, "set is not closed under multiplication");
      }
    }
  }
  return h;
}

bool is_subgroup_of(const Subgroup& h, const Subgroup& k) {
  return std::includes(k.members.begin(), k.members.end(), h.members.begin(), h.members.end());
}

Subgroup conjugate(const FiniteGroup& g, const Subgroup& h, std::uint32_t x) {
  Subgroup out;
  out.members.reserve(h.members.size());
  for (auto m : h.members) out.members.push_back(g.conjugate(x, m));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::uint32_t> members;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (auto m : h.members) {
      if (!h.contains(g.conjugate(x, m))) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(x);
  }
  return Subgroup{std::move(members)};
}

std::vector<std::uint32_t> canonical_key(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::uint32_t> best = h.members;
  for (std::uint32_t x = 1; x < g.order(); ++x) {
    auto c = conjugate(g, h, x);
    if (c.members < best) best = std::move(c.members);
  }
  return best;
}

bool are_conjugate(const FiniteGroup& g, const Subgroup& h, const Subgroup& k) {
  if (h.order() != k.order()) return false;
  return canonical_key(g, h) == canonical_key(g, k);
}

std::vector<Subgroup> normal_subgroups(const FiniteGroup& g, const Subgroup& h) {
  std::vector<Subgroup> out;
  for (const auto& cls : subgroup_classes(g)) {
    if (cls.representative.order() > h.order() || h.order() % cls.representative.order() != 0) {
      continue;
    }
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      auto c = conjugate(g, cls.representative, x);
      if (!seen.insert(c.members).second) continue;
      if (!is_subgroup_of(c, h)) continue;
      bool normal = true;
      for (auto y : h.members) {
        for (auto m : c.members) {
          if (!c.contains(g.conjugate(y, m))) {
            normal = false;
            break;
          }
        }
        if (!normal) break;
      }
      if (normal) out.push_back(std::move(c));
    }
  }
  return out;
}

std::size_t weyl_order(const FiniteGroup& g, const Subgroup& h) {
  return normalizer(g, h).order() / h.order();
}

std::vector<SubgroupClass> subgroup_classes(const FiniteGroup& g, std::size_t order_cap) {
  if (g.order() > order_cap) {
    throw Error(ErrorCode::ClosureCapExceeded,
                "subgroup lattice requested for group of order " + std::to_string(g.order()));
  }
  // Every subgroup is reached from a smaller one by adjoining one element, so
  // extending class representatives level by level yields all classes.
  std::map<std::vector<std::uint32_t>, Subgroup> found;
  std::vector<Subgroup> frontier{trivial_subgroup(g)};
  found.emplace(canonical_key(g, frontier[0]), frontier[0]);
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier) {
      for (std::uint32_t x = 1; x < g.order(); ++x) {
        if (h.contains(x)) continue;
        auto gens = h.members;
        gens.push_back(x);
        auto k = generate_subgroup(g, gens);
        auto key = canonical_key(g, k);
        if (found.count(key)) continue;
        found.emplace(key, k);
        next.push_back(std::move(k));
      }
    }
    frontier = std::move(next);
  }
  std::vector<SubgroupClass> out;
  for (auto& [key, rep] : found) {
    SubgroupClass cls;
    cls.representative = Subgroup{key};
    cls.class_size = g.order() / normalizer(g, cls.representative).order();
    out.push_back(std::move(cls));
  }
  std::stable_sort(out.begin(), out.end(), [](const SubgroupClass& a, const SubgroupClass& b) {
    if (a.representative.order() != b.representative.order()) {
      return a.representative.order() < b.representative.order();
    }
    if (a.class_size != b.class_size) return a.class_size < b.class_size;
    return a.representative.members < b.representative.members;
  });
  return out;
}

std::size_t n_count(const FiniteGroup& g, const Subgroup& h, const SubgroupClass& k) {
  if (k.representative.order() % h.order() != 0) return 0;
  std::set<std::vector<std::uint32_t>> seen;
  std::size_t count = 0;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    auto c = conjugate(g, k.representative, x);
    if (!seen.insert(c.members).second) continue;
    if (is_subgroup_of(h, c)) ++count;
  }
  return count;
}

std::size_t class_index(const FiniteGroup& g, const std::vector<SubgroupClass>& classes,
                        const Subgroup& h) {
  auto key = canonical_key(g, h);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].representative.order() == h.order() && classes[i].representative.members == key) {
      return i;
    }
  }
  throw Error(ErrorCode::NotASubgroup, "subgroup class not found");
}

// ---------------------------------------------------------------------------

std::int64_t CharacterTable::degree(std::size_t irrep) const {
  return boost::rational_cast<std::int64_t>(characters[irrep][element_column[0]]);
}

Rational CharacterTable::value(std::size_t irrep, std::uint32_t element) const {
  return characters[irrep][element_column[element]];
}

CharacterTable make_character_table(const FiniteGroup& g,
                                    const std::vector<std::string>& representatives,
                                    std::vector<std::string> labels,
                                    std::vector<std::vector<Rational>> rows) {
  CharacterTable t;
  const std::size_t nc = representatives.size();
  if (nc != g.conjugacy_classes().size()) {
    throw Error(ErrorCode::SchemaError, "character table has " + std::to_string(nc) +
                                            " columns, group has " +
                                            std::to_string(g.conjugacy_classes().size()) +
                                            " classes");
  }
  if (rows.size() != nc || labels.size() != nc) {
    throw Error(ErrorCode::SchemaError, "character table must be square with one label per row");
  }
  t.element_column.assign(g.order(), static_cast<std::uint32_t>(-1));
  for (std::size_t c = 0; c < nc; ++c) {
    auto rep = g.index_of(Permutation::parse_cycles(representatives[c], g.degree()));
    t.class_representatives.push_back(rep);
    const auto& cls = g.conjugacy_classes()[g.class_of(rep)];
    t.class_sizes.push_back(cls.size());
    for (auto x : cls) {
      if (t.element_column[x] != static_cast<std::uint32_t>(-1)) {
        throw Error(ErrorCode::SchemaError, "two table columns share a conjugacy class");
      }
      t.element_column[x] = static_cast<std::uint32_t>(c);
    }
  }
  for (const auto& row : rows) {
    if (row.size() != nc) throw Error(ErrorCode::SchemaError, "ragged character table row");
  }
  // Real characters assumed: <chi_i, chi_j> = sum |C| chi_i chi_j / |G|.
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      Rational ip = 0;
      for (std::size_t c = 0; c < nc; ++c) {
        ip += Rational(static_cast<std::int64_t>(t.class_sizes[c])) * rows[i][c] * rows[j][c];
      }
      ip /= static_cast<std::int64_t>(g.order());
      if (ip != Rational(i == j ? 1 : 0)) {
        throw Error(ErrorCode::SchemaError, "character table rows are not orthonormal");
      }
    }
  }
  t.labels = std::move(labels);
  t.characters = std::move(rows);
  return t;
}

OrthogonalAction::OrthogonalAction(std::shared_ptr<const FiniteGroup> group,
                                   const std::vector<Eigen::MatrixXd>& generator_matrices)
    : group_(std::move(group)) {
  const auto& g = *group_;
  if (generator_matrices.size() != g.generators().size()) {
    throw Error(ErrorCode::EquivarianceViolation, "one matrix per generator required");
  }
  dimension_ = generator_matrices.empty() ? 0 : static_cast<std::size_t>(generator_matrices[0].rows());
  for (const auto& m : generator_matrices) {
    if (static_cast<std::size_t>(m.rows()) != dimension_ ||
        static_cast<std::size_t>(m.cols()) != dimension_) {
      throw Error(ErrorCode::EquivarianceViolation, "generator matrices must be square and equal size");
    }
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    if ((m.transpose() * m - id).cwiseAbs().maxCoeff() > 1e-9) {
      throw Error(ErrorCode::EquivarianceViolation, "generator matrix is not orthogonal");
    }
  }
  const auto& tree = g.cayley_tree();
  matrices_.resize(g.order());
  matrices_[0] = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dimension_),
                                           static_cast<Eigen::Index>(dimension_));
  for (std::size_t i = 1; i < g.order(); ++i) {
    matrices_[i] = matrices_[tree[i].first] * generator_matrices[tree[i].second];
  }
  for (std::uint32_t a = 0; a < g.order(); ++a) {
    for (std::size_t k = 0; k < generator_matrices.size(); ++k) {
      auto b = g.multiply(a, g.generator_indices()[k]);
      if ((matrices_[a] * generator_matrices[k] - matrices_[b]).cwiseAbs().maxCoeff() > 1e-8) {
        throw Error(ErrorCode::EquivarianceViolation,
                    "generator matrices do not define a homomorphism");
      }
    }
  }
}

Eigen::MatrixXd permutation_matrix(const Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.degree());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(p(static_cast<std::uint32_t>(i)), i) = 1.0;
  return m;
}

std::vector<IsotypicMultiplicity> isotypic_decompose(const OrthogonalAction& action,
                                                     const CharacterTable& table) {
  const auto& g = action.group();
  std::vector<IsotypicMultiplicity> out;
  std::size_t total = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    double sum = 0;
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      sum += action.trace(x) * boost::rational_cast<double>(table.value(i, x));
    }
    double m = sum / static_cast<double>(g.order());
    double r = std::round(m);
    if (std::abs(m - r) > 1e-6 || r < 0) {
      throw Error(ErrorCode::NonIntegralMultiplicity,
                  "multiplicity of " + table.labels[i] + " is " + std::to_string(m));
    }
    auto mult = static_cast<std::int64_t>(r);
    total += static_cast<std::size_t>(mult * table.degree(i));
    out.push_back({i, table.labels[i], mult});
  }
  if (total != action.dimension()) {
    throw Error(ErrorCode::NonIntegralMultiplicity, "isotypic dimensions do not sum to dim V");
  }
  return out;
}

int fixed_dim(const OrthogonalAction& action, const Subgroup& h) {
  double sum = 0;
  for (auto x : h.members) sum += action.trace(x);
  double d = sum / static_cast<double>(h.order());
  double r = std::round(d);
  if (std::abs(d - r) > 1e-6) {
    throw Error(ErrorCode::NonIntegralTrace, "average trace " + std::to_string(d));
  }
  return static_cast<int>(r);
}

}  // namespace equideg
