#include "equideg/orbit_types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "equideg/error.hpp"

namespace equideg {

namespace {

constexpr std::int64_t kD = kAngleDenominator;
constexpr double kTol = 1e-9;

std::int64_t mod_d(std::int64_t a) {
  a %= kD;
  return a < 0 ? a + kD : a;
}

std::uint64_t conj_packed(const GElement& e, std::int64_t shift, std::uint32_t gamma,
                          const FiniteGroup& gp) {
  GElement out = e;
  if (e.reflection) out.angle = mod_d(e.angle + shift);
  out.gamma = gp.conjugate(gamma, e.gamma);
  return pack(out);
}

std::vector<std::uint64_t> conjugate_set(const std::vector<GElement>& elems, std::int64_t shift,
                                         std::uint32_t gamma, const FiniteGroup& gp) {
  std::vector<std::uint64_t> out;
  out.reserve(elems.size());
  for (const auto& e : elems) out.push_back(conj_packed(e, shift, gamma, gp));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GElement> unpack_all(const std::vector<std::uint64_t>& packed) {
  std::vector<GElement> out;
  out.reserve(packed.size());
  for (auto p : packed) out.push_back(unpack(p));
  return out;
}

std::vector<std::int64_t> reflection_angles(const std::vector<GElement>& elems) {
  std::vector<std::int64_t> out;
  for (const auto& e : elems) {
    if (e.reflection) out.push_back(e.angle);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::int64_t> differences(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out;
  for (auto x : a) {
    for (auto y : b) out.push_back(mod_d(x - y));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> canonical_finite(const std::vector<std::uint64_t>& packed,
                                            const FiniteGroup& gp) {
  auto elems = unpack_all(packed);
  auto angles = reflection_angles(elems);
  if (angles.empty()) {
    throw Error(ErrorCode::InfiniteWeyl, "finite subgroup without reflection has infinite Weyl group");
  }
  std::vector<std::uint64_t> best;
  for (auto phi : angles) {
    for (std::uint32_t g = 0; g < gp.order(); ++g) {
      auto c = conjugate_set(elems, -phi, g, gp);
      if (best.empty() || c < best) best = std::move(c);
    }
  }
  return best;
}

Subgroup subgroup_from(std::vector<std::uint32_t> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return Subgroup{std::move(members)};
}

int rotation_order_of(std::int64_t angle) {
  if (angle == 0) return 1;
  return static_cast<int>(kD / std::gcd(angle, kD));
}

std::string subscript(const std::string& digits) {
  static const char* subs[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  std::string out;
  for (char c : digits) {
    if (c >= '0' && c <= '9') {
      out += subs[c - '0'];
    } else {
      out += c;
    }
  }
  return out;
}

std::string pretty_name(const std::string& name) {
  std::size_t i = 0;
  std::string out;
  if (!name.empty() && name[0] == 'Z') {
    out = "ℤ";
    i = 1;
  } else if (!name.empty()) {
    out = name.substr(0, 1);
    i = 1;
  }
  std::string digits;
  while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) digits += name[i++];
  out += subscript(digits);
  std::string rest = name.substr(i);
  if (rest == "p") return out + "ᵖ";
  if (rest == "z") return out + "ᶻ";
  if (rest == "d") return out + "ᵈ";
  if (rest == "m") return out + "⁻";
  if (rest == "hd") return out + "^{d̂}";
  if (rest.empty()) return out;
  return out + "^{" + rest + "}";
}

std::string pretty_o2(const O2Part& p) {
  switch (p.kind) {
    case O2Part::Kind::Z: return "ℤ" + subscript(std::to_string(p.k));
    case O2Part::Kind::D: return "D" + subscript(std::to_string(p.k));
    case O2Part::Kind::SO2: return "SO(2)";
    case O2Part::Kind::O2: return "O(2)";
  }
  return "?";
}

Eigen::MatrixXd null_basis(const Eigen::MatrixXd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i)) < 1e-8) cols.push_back(i);
  }
  Eigen::MatrixXd b(q.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
  }
  return b;
}

struct Subspace {
  Eigen::MatrixXd basis;
  Eigen::MatrixXd projector;
};

std::vector<std::int64_t> subspace_key(const Eigen::MatrixXd& p) {
  std::vector<std::int64_t> key;
  key.reserve(static_cast<std::size_t>(p.size()) + 1);
  key.push_back(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      key.push_back(static_cast<std::int64_t>(std::llround(p(i, j) * 1e6)));
    }
  }
  return key;
}

/// All nonzero subspaces obtained by intersecting fixed subspaces of the
/// given matrices, plus the whole space.
std::vector<Subspace> fixed_subspace_lattice(const std::vector<Eigen::MatrixXd>& mats,
                                             Eigen::Index dim) {
  std::map<std::vector<std::int64_t>, Subspace> found;
  std::vector<Subspace> frontier;
  auto add = [&](Eigen::MatrixXd basis) {
    if (basis.cols() == 0) return;
    Eigen::MatrixXd p = basis * basis.transpose();
    auto key = subspace_key(p);
    if (found.count(key)) return;
    Subspace s{std::move(basis), std::move(p)};
    found.emplace(std::move(key), s);
    frontier.push_back(std::move(s));
  };
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  add(id);
  std::vector<Subspace> generators;
  for (const auto& m : mats) {
    Eigen::MatrixXd diff = m - id;
    Eigen::MatrixXd b = null_basis(diff.transpose() * diff);
    if (b.cols() == 0 || b.cols() == dim) continue;
    Eigen::MatrixXd p = b * b.transpose();
    auto key = subspace_key(p);
    if (found.count(key)) continue;
    Subspace s{b, p};
    found.emplace(std::move(key), s);
    generators.push_back(s);
    frontier.push_back(std::move(s));
  }
  while (!frontier.empty()) {
    auto current = std::move(frontier);
    frontier.clear();
    for (const auto& u : current) {
      for (const auto& g : generators) {
        Eigen::MatrixXd q = (id - u.projector) + (id - g.projector);
        add(null_basis(q));
      }
    }
  }
  std::vector<Subspace> out;
  for (auto& [key, s] : found) out.push_back(std::move(s));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::uint64_t pack(const GElement& e) {
  return (static_cast<std::uint64_t>(mod_d(e.angle)) << 20) |
         (static_cast<std::uint64_t>(e.reflection) << 19) | e.gamma;
}

GElement unpack(std::uint64_t packed) {
  GElement e;
  e.angle = static_cast<std::int64_t>(packed >> 20);
  e.reflection = ((packed >> 19) & 1u) != 0;
  e.gamma = static_cast<std::uint32_t>(packed & ((1u << 19) - 1));
  return e;
}

std::int64_t angle_of(std::int64_t p, std::int64_t q) {
  if (q <= 0 || kD % q != 0) {
    throw Error(ErrorCode::StabilizationFailure,
                "angle denominator " + std::to_string(q) + " exceeds the fixed angle grid");
  }
  return mod_d(p * (kD / q));
}

std::string to_string(const O2Part& p) {
  switch (p.kind) {
    case O2Part::Kind::Z: return "Z" + std::to_string(p.k);
    case O2Part::Kind::D: return "D" + std::to_string(p.k);
    case O2Part::Kind::SO2: return "SO2";
    case O2Part::Kind::O2: return "O2";
  }
  return "?";
}

GElement multiply(const GElement& a, const GElement& b, const FiniteGroup& gamma_prime) {
  GElement out;
  out.gamma = gamma_prime.multiply(a.gamma, b.gamma);
  if (!a.reflection) {
    out.reflection = b.reflection;
    out.angle = mod_d(a.angle + b.angle);
  } else {
    out.reflection = !b.reflection;
    out.angle = mod_d(a.angle - b.angle);
  }
  return out;
}

const AmbientGroup& OrbitType::ambient() const { return *data_->ambient; }
bool OrbitType::is_o2() const { return data_->o2; }
std::size_t OrbitType::order() const {
  return data_->o2 ? data_->gamma_subgroup.order() : data_->elements.size();
}

bool OrbitTypeLess::operator()(const OrbitType& a, const OrbitType& b) const {
  if (a == b) return false;
  const auto& da = a.data();
  const auto& db = b.data();
  if (da.o2 != db.o2) return da.o2;
  if (a.order() != b.order()) return a.order() > b.order();
  if (da.o2) return da.gamma_subgroup.members < db.gamma_subgroup.members;
  return da.elements < db.elements;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const AmbientGroup> AmbientGroup::create(FiniteGroup gamma, CharacterTable table,
                                                         const std::vector<SubgroupName>& names) {
  std::shared_ptr<AmbientGroup> a(new AmbientGroup());
  auto z2 = FiniteGroup::from_generators(2, {Permutation::parse_cycles("(1,2)", 2)});
  a->gamma_prime_ = std::make_shared<const FiniteGroup>(direct_product(gamma, z2));
  a->gamma_ = std::make_shared<const FiniteGroup>(std::move(gamma));
  a->table_ = std::move(table);
  const auto& g = *a->gamma_;
  const auto& gp = *a->gamma_prime_;
  const std::size_t d = g.degree();
  if (gp.order() >= (1u << 19)) {
    throw Error(ErrorCode::ClosureCapExceeded, "Gamma' too large for element packing");
  }
  a->gamma_part_.resize(gp.order());
  a->sign_.resize(gp.order());
  for (std::uint32_t x = 0; x < gp.order(); ++x) {
    const auto& im = gp.element(x).images();
    std::vector<std::uint32_t> head(im.begin(), im.begin() + static_cast<std::ptrdiff_t>(d));
    a->gamma_part_[x] = g.index_of(Permutation(head));
    a->sign_[x] = im[d] == d ? 1 : -1;
    if (a->gamma_part_[x] == 0 && a->sign_[x] == -1) a->antipode_ = x;
  }
  a->exponent_ = gp.exponent();
  a->classes_ = equideg::subgroup_classes(gp);
  for (const auto& c : a->classes_) a->class_keys_.push_back(c.representative.members);

  std::map<std::string, int> used;
  for (const auto& n : names) {
    std::vector<std::uint32_t> gens;
    for (const auto& text : n.generators) {
      gens.push_back(gp.index_of(Permutation::parse_cycles(text, gp.degree())));
    }
    auto k = generate_subgroup(gp, gens);
    auto idx = a->class_of(k);
    if (!a->classes_[idx].name.empty()) {
      throw Error(ErrorCode::SchemaError,
                  "subgroup names '" + a->classes_[idx].name + "' and '" + n.name +
                      "' denote the same class");
    }
    int count = ++used[n.name];
    a->classes_[idx].name = count == 1 ? n.name : n.name + "_" + std::to_string(count);
  }
  for (std::size_t i = 0; i < a->classes_.size(); ++i) {
    if (a->classes_[i].name.empty()) {
      a->classes_[i].name =
          "C" + std::to_string(a->classes_[i].representative.order()) + "_" + std::to_string(i);
    }
  }
  return a;
}

std::size_t AmbientGroup::class_of(const Subgroup& k) const {
  auto key = canonical_key(*gamma_prime_, k);
  for (std::size_t i = 0; i < class_keys_.size(); ++i) {
    if (class_keys_[i] == key) return i;
  }
  throw Error(ErrorCode::NotASubgroup, "subgroup class of Gamma' not found");
}

std::optional<std::size_t> AmbientGroup::class_by_name(const std::string& name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].name == name) return i;
  }
  return std::nullopt;
}

int AmbientGroup::irrep_dim(std::size_t j) const {
  if (j >= table_.size()) throw Error(ErrorCode::SchemaError, "irrep index out of range");
  return static_cast<int>(table_.degree(j));
}

double AmbientGroup::irrep_character(std::size_t j, std::uint32_t g) const {
  return boost::rational_cast<double>(table_.value(j, gamma_part_[g])) * sign_[g];
}

const std::vector<Eigen::MatrixXd>& AmbientGroup::irrep_matrices(std::size_t j) const {
  std::lock_guard lock(mutex_);
  auto it = irrep_matrices_.find(j);
  if (it != irrep_matrices_.end()) return it->second;
  const auto& g = *gamma_;
  const auto n = static_cast<Eigen::Index>(g.order());
  const int dj = irrep_dim(j);
  // Left regular representation of Gamma.
  std::vector<Eigen::MatrixXd> reg(g.order(), Eigen::MatrixXd::Zero(n, n));
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    for (std::uint32_t h = 0; h < g.order(); ++h) reg[x](g.multiply(x, h), h) = 1.0;
  }
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n, n);
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    proj += boost::rational_cast<double>(table_.value(j, x)) * reg[x];
  }
  proj *= static_cast<double>(dj) / static_cast<double>(g.order());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(0.5 * (proj + proj.transpose()));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(pe.eigenvalues()(i) - 1.0) < 1e-6) cols.push_back(i);
  }
  Eigen::MatrixXd b0(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    b0.col(static_cast<Eigen::Index>(c)) = pe.eigenvectors().col(cols[c]);
  }
  std::mt19937 rng(20240607u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c <= r; ++c) s(r, c) = s(c, r) = uni(rng);
    }
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
    for (const auto& m : reg) avg += m * s * m.transpose();
    Eigen::MatrixXd restricted = b0.transpose() * avg * b0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()));
    Eigen::MatrixXd basis = b0 * es.eigenvectors().leftCols(dj);
    double spread = es.eigenvalues()(dj - 1) - es.eigenvalues()(0);
    double gap = b0.cols() > dj ? es.eigenvalues()(dj) - es.eigenvalues()(dj - 1) : 1.0;
    if (spread > 1e-8 * (1.0 + std::abs(es.eigenvalues()(0))) || gap < 1e-6) continue;
    std::vector<Eigen::MatrixXd> rho(g.order());
    bool ok = true;
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      rho[x] = basis.transpose() * reg[x] * basis;
      double chi = boost::rational_cast<double>(table_.value(j, x));
      if (std::abs(rho[x].trace() - chi) > 1e-6) ok = false;
    }
    if (!ok) continue;
    std::vector<Eigen::MatrixXd> out(gamma_prime_->order());
    for (std::uint32_t x = 0; x < gamma_prime_->order(); ++x) {
      out[x] = static_cast<double>(sign_[x]) * rho[gamma_part_[x]];
    }
    return irrep_matrices_.emplace(j, std::move(out)).first->second;
  }
  throw Error(ErrorCode::NonScalarIsotypicBlock,
              "could not split isotypic component of " + table_.labels[j]);
}

void AmbientGroup::finish_data(OrbitTypeData& d) const {
  const auto& gp = *gamma_prime_;
  d.ambient = this;
  if (d.o2) {
    d.weyl = static_cast<std::int64_t>(weyl_order(gp, d.gamma_subgroup));
    auto idx = class_of(d.gamma_subgroup);
    d.amalgam = Amalgam{{O2Part::Kind::O2, 0}, {O2Part::Kind::O2, 0}, idx, idx};
    if (d.gamma_subgroup.order() == gp.order()) {
      d.symbol = "(G)";
      d.pretty = "(G)";
      return;
    }
    d.symbol = "(O2 x " + classes_[idx].name + ")";
    d.pretty = "(O(2)×" + pretty_name(classes_[idx].name) + ")";
    return;
  }
  auto elems = unpack_all(d.elements);
  d.reflection_angles = reflection_angles(elems);
  std::set<std::int64_t> rotations;
  std::set<std::int64_t> kernel_rotations;
  bool kernel_reflection = false;
  std::vector<std::uint32_t> k2;
  std::vector<std::uint32_t> z2;
  for (const auto& e : elems) {
    if (!e.reflection) rotations.insert(e.angle);
    if (e.gamma == 0) {
      if (e.reflection) {
        kernel_reflection = true;
      } else {
        kernel_rotations.insert(e.angle);
      }
    }
    k2.push_back(e.gamma);
    if (!e.reflection && e.angle == 0) z2.push_back(e.gamma);
  }
  d.rotation_count = rotations.size();
  // Normalizer: conjugations by rotations realizing a shift of the reflection
  // angles, times Gamma'. Each admissible (shift, gamma) gives two rotations
  // and two reflections.
  std::int64_t count = 0;
  for (auto delta : differences(d.reflection_angles, {d.reflection_angles.front()})) {
    for (std::uint32_t g = 0; g < gp.order(); ++g) {
      if (conjugate_set(elems, delta, g, gp) == d.elements) ++count;
    }
  }
  if ((4 * count) % static_cast<std::int64_t>(d.elements.size()) != 0) {
    throw Error(ErrorCode::InfiniteWeyl, "normalizer order not divisible by |H|");
  }
  d.weyl = 4 * count / static_cast<std::int64_t>(d.elements.size());

  O2Part k1{O2Part::Kind::D, static_cast<int>(rotations.size())};
  O2Part z1{kernel_reflection ? O2Part::Kind::D : O2Part::Kind::Z,
            static_cast<int>(kernel_rotations.size())};
  auto k2c = class_of(subgroup_from(k2));
  auto z2c = class_of(subgroup_from(z2));
  d.amalgam = Amalgam{k1, z1, k2c, z2c};
  d.symbol = "(" + to_string(k1) + "^" + to_string(z1) + " x^" + classes_[z2c].name + " " +
             classes_[k2c].name + ")";
  d.pretty = "(" + pretty_o2(k1) + "^{" + pretty_o2(z1) + "}×^{" + pretty_name(classes_[z2c].name) +
             "}" + pretty_name(classes_[k2c].name) + ")";
}

OrbitType AmbientGroup::intern(std::vector<std::uint64_t> elements) const {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  auto key = canonical_finite(elements, *gamma_prime_);
  {
    std::lock_guard lock(mutex_);
    auto it = finite_types_.find(key);
    if (it != finite_types_.end()) return OrbitType(it->second.get());
  }
  auto data = std::make_unique<OrbitTypeData>();
  data->elements = key;
  finish_data(*data);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = finite_types_.emplace(std::move(key), std::move(data));
  return OrbitType(it->second.get());
}

OrbitType AmbientGroup::intern_o2(const Subgroup& k) const {
  auto key = canonical_key(*gamma_prime_, k);
  {
    std::lock_guard lock(mutex_);
    auto it = o2_types_.find(key);
    if (it != o2_types_.end()) return OrbitType(it->second.get());
  }
  auto data = std::make_unique<OrbitTypeData>();
  data->o2 = true;
  data->gamma_subgroup = Subgroup{key};
  finish_data(*data);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = o2_types_.emplace(std::move(key), std::move(data));
  return OrbitType(it->second.get());
}

OrbitType AmbientGroup::unit() const { return intern_o2(whole_group(*gamma_prime_)); }

std::optional<std::int64_t> AmbientGroup::cached_n(const OrbitTypeData* l,
                                                   const OrbitTypeData* h) const {
  std::lock_guard lock(mutex_);
  auto it = n_memo_.find({l, h});
  if (it == n_memo_.end()) return std::nullopt;
  return it->second;
}

void AmbientGroup::store_n(const OrbitTypeData* l, const OrbitTypeData* h,
                           std::int64_t value) const {
  std::lock_guard lock(mutex_);
  n_memo_[{l, h}] = value;
}

std::optional<AmbientGroup::ProductTerms> AmbientGroup::cached_product(
    const OrbitTypeData* a, const OrbitTypeData* b) const {
  if (b < a) std::swap(a, b);
  std::lock_guard lock(mutex_);
  auto it = product_memo_.find({a, b});
  if (it == product_memo_.end()) return std::nullopt;
  return it->second;
}

void AmbientGroup::store_product(const OrbitTypeData* a, const OrbitTypeData* b,
                                 ProductTerms value) const {
  if (b < a) std::swap(a, b);
  std::lock_guard lock(mutex_);
  product_memo_[{a, b}] = std::move(value);
}

// ---------------------------------------------------------------------------

FiniteGroup s4_group() {
  return FiniteGroup::from_generators(
      4, {Permutation::parse_cycles("(1,2)", 4), Permutation::parse_cycles("(1,2,3,4)", 4)});
}

CharacterTable s4_character_table(const FiniteGroup& s4) {
  using R = Rational;
  return make_character_table(
      s4, {"()", "(1,2)", "(1,2)(3,4)", "(1,2,3)", "(1,2,3,4)"},
      {"chi0", "chi1", "chi2", "chi3", "chi4"},
      {{R(1), R(1), R(1), R(1), R(1)},
       {R(1), R(-1), R(1), R(1), R(-1)},
       {R(2), R(0), R(2), R(-1), R(0)},
       {R(3), R(-1), R(-1), R(0), R(1)},
       {R(3), R(1), R(-1), R(0), R(-1)}});
}

std::vector<SubgroupName> s4z2_subgroup_names() {
  return {
      {"Z1", {}},
      {"Z2", {"(1,2)(3,4)"}},
      {"D1z", {"(1,2)(5,6)"}},
      {"D1", {"(1,2)"}},
      {"Z2m", {"(1,2)(3,4)(5,6)"}},
      {"Z1p", {"(5,6)"}},
      {"Z3", {"(1,2,3)"}},
      {"V4", {"(1,2)(3,4)", "(1,3)(2,4)"}},
      {"D2z", {"(1,2)(5,6)", "(3,4)(5,6)"}},
      {"Z4", {"(1,2,3,4)"}},
      {"D2", {"(1,2)", "(3,4)"}},
      {"D1p", {"(1,2)", "(5,6)"}},
      {"D2d", {"(1,2)", "(3,4)(5,6)"}},
      {"V4m", {"(1,2)(3,4)", "(1,3)(2,4)(5,6)"}},
      {"D2p", {"(1,2)(3,4)", "(5,6)"}},
      {"Z4d", {"(1,3,2,4)(5,6)"}},
      {"D3", {"(1,2,3)", "(1,2)"}},
      {"D3z", {"(1,2,3)", "(1,2)(5,6)"}},
      {"Z3p", {"(1,2,3)", "(5,6)"}},
      {"V4p", {"(1,2)(3,4)", "(1,3)(2,4)", "(5,6)"}},
      {"D4z", {"(1,3,2,4)", "(1,2)(5,6)"}},
      {"D4d", {"(1,3,2,4)(5,6)", "(1,2)"}},
      {"Z4p", {"(1,2,3,4)", "(5,6)"}},
      {"D4", {"(1,3,2,4)", "(1,2)"}},
      {"D4z", {"(1,2)", "(3,4)", "(5,6)"}},
      {"D4hd", {"(1,3,2,4)(5,6)", "(1,2)(5,6)"}},
      {"D3p", {"(1,2,3)", "(1,2)", "(5,6)"}},
      {"A4", {"(1,2,3)", "(1,2)(3,4)"}},
      {"D4p", {"(1,3,2,4)", "(1,2)", "(5,6)"}},
      {"A4p", {"(1,2,3)", "(1,2)(3,4)", "(5,6)"}},
      {"S4", {"(1,2)", "(1,2,3,4)"}},
      {"S4m", {"(1,2)(5,6)", "(1,2,3,4)(5,6)"}},
      {"S4p", {"(1,2)", "(1,2,3,4)", "(5,6)"}},
  };
}

std::shared_ptr<const AmbientGroup> s4_ambient() {
  static const std::shared_ptr<const AmbientGroup> ambient = [] {
    auto s4 = s4_group();
    auto table = s4_character_table(s4);
    return AmbientGroup::create(std::move(s4), std::move(table), s4z2_subgroup_names());
  }();
  return ambient;
}

// ---------------------------------------------------------------------------

std::vector<GElement> elements_of(const OrbitType& h, std::int64_t offset) {
  if (h.is_o2()) {
    throw Error(ErrorCode::InfiniteSubgroup, "O(2) x K has no finite element list");
  }
  auto elems = unpack_all(h.data().elements);
  for (auto& e : elems) {
    if (e.reflection) e.angle = mod_d(e.angle + offset);
  }
  return elems;
}

std::int64_t weyl_order(const OrbitType& h) { return h.data().weyl; }

namespace {

std::int64_t count_gamma_conjugates_containing(const FiniteGroup& gp, const Subgroup& inner,
                                               const Subgroup& k) {
  if (k.order() % inner.order() != 0) return 0;
  std::set<std::vector<std::uint32_t>> seen;
  std::int64_t count = 0;
  for (std::uint32_t g = 0; g < gp.order(); ++g) {
    auto c = conjugate(gp, k, g);
    if (!seen.insert(c.members).second) continue;
    if (is_subgroup_of(inner, c)) ++count;
  }
  return count;
}

Subgroup gamma_projection(const OrbitType& l) {
  std::vector<std::uint32_t> members;
  for (auto p : l.data().elements) members.push_back(unpack(p).gamma);
  return subgroup_from(std::move(members));
}

std::int64_t n_count_uncached(const OrbitType& l, const OrbitType& h) {
  const auto& amb = l.ambient();
  const auto& gp = amb.gamma_prime();
  if (l.is_o2()) {
    if (!h.is_o2()) return 0;
    return count_gamma_conjugates_containing(gp, l.data().gamma_subgroup, h.data().gamma_subgroup);
  }
  if (h.is_o2()) {
    return count_gamma_conjugates_containing(gp, gamma_projection(l), h.data().gamma_subgroup);
  }
  if (h.order() % l.order() != 0) return 0;
  const auto& lel = l.data().elements;
  const auto& hel = h.data().elements;
  auto helems = unpack_all(hel);
  GElement probe;
  for (auto p : lel) {
    auto e = unpack(p);
    if (e.reflection) {
      probe = e;
      break;
    }
  }
  std::set<std::vector<std::uint64_t>> found;
  for (auto phi_h : h.data().reflection_angles) {
    const std::int64_t delta = mod_d(probe.angle - phi_h);
    for (std::uint32_t g = 0; g < gp.order(); ++g) {
      GElement pre{phi_h, true, gp.conjugate(gp.inverse(g), probe.gamma)};
      if (!std::binary_search(hel.begin(), hel.end(), pack(pre))) continue;
      auto c = conjugate_set(helems, delta, g, gp);
      if (!std::includes(c.begin(), c.end(), lel.begin(), lel.end())) continue;
      found.insert(std::move(c));
    }
  }
  return static_cast<std::int64_t>(found.size());
}

}  // namespace

std::int64_t n_count(const OrbitType& l, const OrbitType& h) {
  if (l == h) return 1;
  const auto& amb = l.ambient();
  if (auto cached = amb.cached_n(&l.data(), &h.data())) return *cached;
  auto value = n_count_uncached(l, h);
  amb.store_n(&l.data(), &h.data(), value);
  return value;
}

bool leq(const OrbitType& l, const OrbitType& h) { return n_count(l, h) > 0; }

std::vector<OrbitType> intersection_types(const OrbitType& h, const OrbitType& k) {
  const auto& amb = h.ambient();
  const auto& gp = amb.gamma_prime();
  std::set<OrbitType, OrbitTypeLess> out;
  if (h.is_o2() && k.is_o2()) {
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint32_t g = 0; g < gp.order(); ++g) {
      auto c = conjugate(gp, k.data().gamma_subgroup, g);
      std::vector<std::uint32_t> inter;
      const auto& a = h.data().gamma_subgroup.members;
      std::set_intersection(a.begin(), a.end(), c.members.begin(), c.members.end(),
                            std::back_inserter(inter));
      if (seen.insert(inter).second) out.insert(amb.intern_o2(Subgroup{inter}));
    }
    return {out.begin(), out.end()};
  }
  if (h.is_o2()) return intersection_types(k, h);
  std::set<std::vector<std::uint64_t>> raw;
  const auto& hel = h.data().elements;
  if (k.is_o2()) {
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint32_t g = 0; g < gp.order(); ++g) {
      auto c = conjugate(gp, k.data().gamma_subgroup, g);
      if (!seen.insert(c.members).second) continue;
      std::vector<std::uint64_t> inter;
      bool reflection = false;
      for (auto p : hel) {
        auto e = unpack(p);
        if (c.contains(e.gamma)) {
          inter.push_back(p);
          reflection |= e.reflection;
        }
      }
      if (reflection) raw.insert(std::move(inter));
    }
  } else {
    auto kelems = unpack_all(k.data().elements);
    for (auto delta : differences(h.data().reflection_angles, k.data().reflection_angles)) {
      for (std::uint32_t g = 0; g < gp.order(); ++g) {
        auto c = conjugate_set(kelems, delta, g, gp);
        std::vector<std::uint64_t> inter;
        std::set_intersection(hel.begin(), hel.end(), c.begin(), c.end(),
                              std::back_inserter(inter));
        bool reflection = std::any_of(inter.begin(), inter.end(),
                                      [](std::uint64_t p) { return ((p >> 19) & 1u) != 0; });
        if (reflection) raw.insert(std::move(inter));
      }
    }
  }
  for (const auto& r : raw) out.insert(amb.intern(r));
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------

std::int64_t truncation_level(const OrbitType& l, const OrbitType& h) {
  std::int64_t lcm = 1;
  for (const auto* t : {&l, &h}) {
    if (t->is_o2()) continue;
    for (auto p : t->data().elements) {
      auto e = unpack(p);
      lcm = std::lcm(lcm, static_cast<std::int64_t>(rotation_order_of(e.angle)));
    }
  }
  return 4 * lcm;
}

namespace {

void require_on_grid(const OrbitType& t, std::int64_t n) {
  if (t.is_o2()) return;
  const std::int64_t step = kD / n;
  for (auto p : t.data().elements) {
    if (unpack(p).angle % step != 0) {
      throw Error(ErrorCode::StabilizationFailure,
                  "representative not contained in D_" + std::to_string(n) + " x Gamma'");
    }
  }
}

}  // namespace

std::int64_t n_truncated(const OrbitType& l, const OrbitType& h, std::int64_t n) {
  if (l.is_o2() || h.is_o2()) return n_count_uncached(l, h);
  if (kD % n != 0) throw Error(ErrorCode::StabilizationFailure, "truncation level off the angle grid");
  require_on_grid(l, n);
  require_on_grid(h, n);
  const auto& gp = l.ambient().gamma_prime();
  const auto& lel = l.data().elements;
  const auto& hel = h.data().elements;
  auto helems = unpack_all(hel);
  std::vector<GElement> flipped = helems;
  for (auto& e : flipped) e.angle = mod_d(-e.angle);
  GElement probe;
  for (auto p : lel) {
    auto e = unpack(p);
    if (e.reflection) {
      probe = e;
      break;
    }
  }
  const std::int64_t step = kD / n;
  std::set<std::vector<std::uint64_t>> found;
  for (int kappa = 0; kappa < 2; ++kappa) {
    const auto& base = kappa ? flipped : helems;
    std::vector<std::uint64_t> base_packed;
    for (const auto& e : base) base_packed.push_back(pack(e));
    std::sort(base_packed.begin(), base_packed.end());
    for (std::int64_t t = 0; t < n; ++t) {
      // Conjugation by r_{t/N} (after kappa) shifts reflections by 2t/N.
      const std::int64_t shift = mod_d(2 * t * step);
      for (std::uint32_t g = 0; g < gp.order(); ++g) {
        GElement pre{mod_d(probe.angle - shift), true, gp.conjugate(gp.inverse(g), probe.gamma)};
        if (!std::binary_search(base_packed.begin(), base_packed.end(), pack(pre))) continue;
        auto c = conjugate_set(base, shift, g, gp);
        if (!std::includes(c.begin(), c.end(), lel.begin(), lel.end())) continue;
        found.insert(std::move(c));
      }
    }
  }
  return static_cast<std::int64_t>(found.size());
}

std::int64_t weyl_truncated(const OrbitType& h, std::int64_t n) {
  if (h.is_o2()) return weyl_order(h);
  require_on_grid(h, n);
  const auto& gp = h.ambient().gamma_prime();
  auto elems = unpack_all(h.data().elements);
  std::vector<GElement> flipped = elems;
  for (auto& e : flipped) e.angle = mod_d(-e.angle);
  const std::int64_t step = kD / n;
  std::int64_t count = 0;
  for (int kappa = 0; kappa < 2; ++kappa) {
    for (std::int64_t t = 0; t < n; ++t) {
      const std::int64_t shift = mod_d(2 * t * step);
      for (std::uint32_t g = 0; g < gp.order(); ++g) {
        if (conjugate_set(kappa ? flipped : elems, shift, g, gp) == h.data().elements) ++count;
      }
    }
  }
  return count / static_cast<std::int64_t>(h.order());
}

std::int64_t n_stabilized(const OrbitType& l, const OrbitType& h) {
  const auto level = truncation_level(l, h);
  const auto a = n_truncated(l, h, level);
  const auto b = n_truncated(l, h, 2 * level);
  const auto exact = n_count(l, h);
  if (a != b || a != exact) {
    throw Error(ErrorCode::StabilizationFailure,
                "n(" + symbol(l) + ", " + symbol(h) + ") = " + std::to_string(a) + " at N=" +
                    std::to_string(level) + ", " + std::to_string(b) + " at 2N, " +
                    std::to_string(exact) + " exact");
  }
  return exact;
}

// ---------------------------------------------------------------------------

OrbitType fold(const OrbitType& h, int s) {
  if (s < 1) throw Error(ErrorCode::SchemaError, "folding index must be positive");
  if (s == 1 || h.is_o2()) return h;
  std::vector<std::uint64_t> out;
  for (auto p : h.data().elements) {
    auto e = unpack(p);
    for (int t = 0; t < s; ++t) {
      const std::int64_t num = e.angle + t * kD;
      if (num % s != 0) {
        throw Error(ErrorCode::StabilizationFailure, "folded angle leaves the angle grid");
      }
      out.push_back(pack(GElement{num / s, e.reflection, e.gamma}));
    }
  }
  return h.ambient().intern(std::move(out));
}

int fixed_dim(const OrbitType& h, const IrrepLabel& irrep) {
  const auto& amb = h.ambient();
  double sum = 0;
  std::size_t n = 0;
  if (h.is_o2()) {
    if (irrep.m != 0) return 0;
    for (auto g : h.data().gamma_subgroup.members) sum += amb.irrep_character(irrep.j, g);
    n = h.order();
  } else {
    for (auto p : h.data().elements) {
      auto e = unpack(p);
      double w = 1.0;
      if (irrep.m > 0) {
        w = e.reflection ? 0.0
                         : 2.0 * std::cos(2.0 * std::numbers::pi * irrep.m *
                                          (static_cast<double>(e.angle) / static_cast<double>(kD)));
      }
      sum += w * amb.irrep_character(irrep.j, e.gamma);
    }
    n = h.order();
  }
  double d = sum / static_cast<double>(n);
  double r = std::round(d);
  if (std::abs(d - r) > 1e-6) {
    throw Error(ErrorCode::NonIntegralTrace, "fixed dimension " + std::to_string(d));
  }
  return static_cast<int>(r);
}

Eigen::MatrixXd irrep_matrix(const AmbientGroup& ambient, const IrrepLabel& irrep,
                             const GElement& g) {
  const auto& rho = ambient.irrep_matrices(irrep.j)[g.gamma];
  if (irrep.m == 0) return rho;
  const double theta = 2.0 * std::numbers::pi * irrep.m *
                       (static_cast<double>(g.angle) / static_cast<double>(kD));
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  if (g.reflection) r.col(1) *= -1.0;
  const auto d = rho.rows();
  Eigen::MatrixXd out(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) out.block(a * d, b * d, d, d) = r(a, b) * rho;
  }
  return out;
}

std::vector<OrbitType> orbit_types(const AmbientGroup& ambient, const IrrepLabel& irrep) {
  if (irrep.m < 0) throw Error(ErrorCode::SchemaError, "negative O(2) index");
  const auto& gp = ambient.gamma_prime();
  std::set<OrbitType, OrbitTypeLess> out;
  if (irrep.m == 0) {
    const auto& mats = ambient.irrep_matrices(irrep.j);
    const auto dim = mats[0].rows();
    for (const auto& u : fixed_subspace_lattice(mats, dim)) {
      std::vector<std::uint32_t> stab;
      for (std::uint32_t g = 0; g < gp.order(); ++g) {
        if ((mats[g] * u.basis - u.basis).cwiseAbs().maxCoeff() < kTol) stab.push_back(g);
      }
      out.insert(ambient.intern_o2(Subgroup{stab}));
    }
    return {out.begin(), out.end()};
  }
  const std::int64_t rot = static_cast<std::int64_t>(irrep.m) * ambient.exponent();
  std::vector<GElement> group;
  std::vector<Eigen::MatrixXd> mats;
  for (std::int64_t t = 0; t < rot; ++t) {
    for (int refl = 0; refl < 2; ++refl) {
      for (std::uint32_t g = 0; g < gp.order(); ++g) {
        GElement e{angle_of(t, rot), refl == 1, g};
        group.push_back(e);
        mats.push_back(irrep_matrix(ambient, irrep, e));
      }
    }
  }
  const auto dim = mats[0].rows();
  for (const auto& u : fixed_subspace_lattice(mats, dim)) {
    std::vector<std::uint64_t> stab;
    bool reflection = false;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if ((mats[i] * u.basis - u.basis).cwiseAbs().maxCoeff() < kTol) {
        stab.push_back(pack(group[i]));
        reflection |= group[i].reflection;
      }
    }
    if (!reflection) continue;
    auto t = ambient.intern(std::move(stab));
    if (fixed_dim(t, irrep) != u.basis.cols()) {
      throw Error(ErrorCode::NonIntegralTrace, "isotropy test and character disagree for " + symbol(t));
    }
    out.insert(t);
  }
  return {out.begin(), out.end()};
}

std::vector<OrbitType> maximal_types(const AmbientGroup& ambient, const IrrepLabel& irrep) {
  auto all = orbit_types(ambient, irrep);
  std::vector<OrbitType> out;
  for (const auto& h : all) {
    bool maximal = true;
    for (const auto& k : all) {
      if (k != h && leq(h, k)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(h);
  }
  return out;
}

const Amalgam& amalgam(const OrbitType& h) { return h.data().amalgam; }
const std::string& symbol(const OrbitType& h) { return h.data().symbol; }
const std::string& pretty_symbol(const OrbitType& h) { return h.data().pretty; }

// ---------------------------------------------------------------------------

namespace {

O2Part parse_o2(const std::string& tok, const std::string& text) {
  if (tok == "O2") return {O2Part::Kind::O2, 0};
  if (tok == "SO2") return {O2Part::Kind::SO2, 0};
  if (tok.size() >= 2 && (tok[0] == 'D' || tok[0] == 'Z') &&
      std::all_of(tok.begin() + 1, tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return {tok[0] == 'D' ? O2Part::Kind::D : O2Part::Kind::Z, std::stoi(tok.substr(1))};
  }
  throw Error(ErrorCode::UnknownSymbol, "bad O(2) part '" + tok + "' in " + text);
}

}  // namespace

ParsedSymbol parse_symbol(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  auto fail = [&](const std::string& why) -> ParsedSymbol {
    throw Error(ErrorCode::UnknownSymbol, "cannot parse '" + text + "': " + why);
  };
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') return fail("missing parentheses");
  s = s.substr(1, s.size() - 2);
  ParsedSymbol p;
  if (s.rfind("O2x", 0) == 0) {
    p.k1 = p.z1 = {O2Part::Kind::O2, 0};
    p.k2 = p.z2 = s.substr(3);
    return p;
  }
  auto xpos = s.find('x');
  if (xpos == std::string::npos) return fail("missing 'x'");
  std::string left = s.substr(0, xpos);
  std::string right = s.substr(xpos + 1);
  auto caret = left.find('^');
  if (caret == std::string::npos) return fail("missing O(2) kernel");
  p.k1 = parse_o2(left.substr(0, caret), text);
  p.z1 = parse_o2(left.substr(caret + 1), text);
  if (!right.empty() && right[0] == '^') {
    // Kernel name then group name; split at the boundary where the kernel name
    // ends. Names never contain '^', so the kernel runs to the first uppercase
    // letter starting a new name.
    std::size_t i = 2;
    while (i < right.size() && !std::isupper(static_cast<unsigned char>(right[i]))) ++i;
    p.z2 = right.substr(1, i - 1);
    p.k2 = right.substr(i);
  } else {
    p.z2 = "Z1";
    p.k2 = right;
  }
  if (p.k2.empty() || p.z2.empty()) return fail("missing Gamma' part");
  return p;
}

OrbitType resolve_symbol(const std::string& text, const std::vector<OrbitType>& pool) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  std::vector<OrbitType> matches;
  if (compact == "(G)") {
    for (const auto& t : pool) {
      if (t == t.ambient().unit()) matches.push_back(t);
    }
  } else {
    auto p = parse_symbol(text);
    for (const auto& t : pool) {
      const auto& a = amalgam(t);
      const auto& classes = t.ambient().subgroup_classes();
      if (a.k1 == p.k1 && a.z1 == p.z1 && classes[a.k2].name == p.k2 && classes[a.z2].name == p.z2) {
        matches.push_back(t);
      }
    }
  }
  if (matches.size() != 1) {
    throw Error(ErrorCode::UnknownSymbol, "symbol '" + text + "' matches " +
                                              std::to_string(matches.size()) + " orbit types");
  }
  return matches.front();
}

}  // namespace equideg
