#include "equideg/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "equideg/error.hpp"

namespace equideg {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) schema(where + ": missing '" + key + "'");
  return obj.at(key);
}

void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) schema(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) schema(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
T get(const Json& v, const std::string& where) {
  try {
    return v.get<T>();
  } catch (const Json::exception& e) {
    schema(where + ": " + e.what());
  }
}

std::string cell_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  schema(where + ": character values must be integers or \"p/q\" strings");
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    schema("bad rational '" + text + "'");
  }
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, const std::string& where) {
  const auto n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) schema(where + ": matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

}  // namespace

ModelConfig parse_config(const Json& j) {
  only_keys(j, {"name", "notes", "group", "action", "linearization", "horizon", "analysis"},
            "config");
  ModelConfig c;
  if (j.contains("name")) c.name = get<std::string>(j.at("name"), "name");
  if (j.contains("notes")) c.notes = get<std::vector<std::string>>(j.at("notes"), "notes");

  const auto& g = need(j, "group", "config");
  only_keys(g, {"degree", "gamma_generators", "antipodal", "character_table", "subgroup_names"},
            "group");
  c.group.degree = get<std::size_t>(need(g, "degree", "group"), "group.degree");
  c.group.generators =
      get<std::vector<std::string>>(need(g, "gamma_generators", "group"), "group.gamma_generators");
  if (g.contains("antipodal")) c.group.antipodal = get<bool>(g.at("antipodal"), "group.antipodal");
  if (g.contains("character_table")) {
    const auto& t = g.at("character_table");
    only_keys(t, {"classes", "labels", "rows"}, "group.character_table");
    CharacterTableSpec spec;
    spec.classes = get<std::vector<std::string>>(need(t, "classes", "character_table"), "classes");
    spec.labels = get<std::vector<std::string>>(need(t, "labels", "character_table"), "labels");
    const auto& rows = need(t, "rows", "character_table");
    if (!rows.is_array()) schema("character_table.rows: expected an array");
    for (const auto& row : rows) {
      if (!row.is_array()) schema("character_table.rows: expected arrays");
      std::vector<std::string> cells;
      for (const auto& cell : row) cells.push_back(cell_text(cell, "character_table.rows"));
      spec.rows.push_back(std::move(cells));
    }
    c.group.character_table = std::move(spec);
  }
  if (g.contains("subgroup_names")) {
    const auto& names = g.at("subgroup_names");
    if (!names.is_array()) schema("group.subgroup_names: expected an array");
    for (const auto& entry : names) {
      only_keys(entry, {"name", "generators"}, "group.subgroup_names");
      c.group.subgroup_names.emplace_back(
          get<std::string>(need(entry, "name", "subgroup_names"), "subgroup_names.name"),
          get<std::vector<std::string>>(need(entry, "generators", "subgroup_names"),
                                        "subgroup_names.generators"));
    }
  }

  const auto& a = need(j, "action", "config");
  only_keys(a, {"type", "dimension", "data"}, "action");
  c.action.type = get<std::string>(need(a, "type", "action"), "action.type");
  if (c.action.type == "permutation") {
    c.action.dimension = get<std::size_t>(need(a, "dimension", "action"), "action.dimension");
    c.action.permutations = get<std::vector<std::string>>(need(a, "data", "action"), "action.data");
  } else if (c.action.type == "matrices") {
    c.action.matrices = get<std::vector<std::vector<std::vector<double>>>>(need(a, "data", "action"),
                                                                         "action.data");
    c.action.dimension = c.action.matrices.empty() ? 0 : c.action.matrices.front().size();
    if (a.contains("dimension") &&
        get<std::size_t>(a.at("dimension"), "action.dimension") != c.action.dimension) {
      schema("action.dimension does not match the matrices");
    }
  } else {
    schema("action.type must be \"permutation\" or \"matrices\"");
  }

  const auto& l = need(j, "linearization", "config");
  only_keys(l, {"a", "coupling_matrix", "zeta"}, "linearization");
  c.linearization.a = get<double>(need(l, "a", "linearization"), "linearization.a");
  const auto& cm = need(l, "coupling_matrix", "linearization");
  if (cm.is_array()) {
    c.linearization.coupling.matrix =
        get<std::vector<std::vector<double>>>(cm, "linearization.coupling_matrix");
  } else {
    only_keys(cm, {"template", "c", "d", "adjacency"}, "coupling_matrix");
    if (get<std::string>(need(cm, "template", "coupling_matrix"), "template") != "adjacency") {
      schema("coupling_matrix.template must be \"adjacency\"");
    }
    c.linearization.coupling.adjacency_template = true;
    c.linearization.coupling.c = get<double>(need(cm, "c", "coupling_matrix"), "coupling_matrix.c");
    c.linearization.coupling.d = get<double>(need(cm, "d", "coupling_matrix"), "coupling_matrix.d");
    c.linearization.coupling.adjacency = get<std::vector<std::vector<int>>>(
        need(cm, "adjacency", "coupling_matrix"), "coupling_matrix.adjacency");
  }
  if (l.contains("zeta")) {
    const auto& z = l.at("zeta");
    if (z.is_string()) {
      if (z.get<std::string>() != "sigmoid") schema("linearization.zeta: unknown profile");
    } else {
      only_keys(z, {"breakpoints"}, "linearization.zeta");
      c.linearization.sigmoid = false;
      c.linearization.breakpoints = get<std::vector<std::pair<double, double>>>(
          need(z, "breakpoints", "linearization.zeta"), "linearization.zeta.breakpoints");
    }
  }

  if (j.contains("horizon")) {
    const auto& h = j.at("horizon");
    only_keys(h, {"m_max", "n_max"}, "horizon");
    if (h.contains("m_max")) c.m_max = get<int>(h.at("m_max"), "horizon.m_max");
    if (h.contains("n_max")) c.n_max = get<int>(h.at("n_max"), "horizon.n_max");
    if (c.m_max < 1 || c.n_max < 1 || c.m_max > 200 || c.n_max > 200) {
      schema("horizon must lie in [1, 200]");
    }
  }
  if (j.contains("analysis")) {
    const auto& an = j.at("analysis");
    only_keys(an, {"mode", "k_fixed", "alpha_bracket", "basis"}, "analysis");
    if (an.contains("mode")) c.analysis.mode = parse_mode(get<std::string>(an.at("mode"), "mode"));
    if (an.contains("k_fixed")) c.analysis.k_fixed = get<bool>(an.at("k_fixed"), "k_fixed");
    if (an.contains("alpha_bracket")) {
      c.analysis.alpha_bracket = get<double>(an.at("alpha_bracket"), "alpha_bracket");
      if (!(c.analysis.alpha_bracket > 0)) schema("analysis.alpha_bracket must be positive");
    }
    if (an.contains("basis")) {
      c.analysis.basis = get<std::string>(an.at("basis"), "basis");
      if (c.analysis.basis != "exact" && c.analysis.basis != "listing") {
        schema("analysis.basis must be \"exact\" or \"listing\"");
      }
    }
  }
  return c;
}

Json emit_config(const ModelConfig& c) {
  Json j;
  j["name"] = c.name;
  j["notes"] = c.notes;
  Json g;
  g["degree"] = c.group.degree;
  g["gamma_generators"] = c.group.generators;
  g["antipodal"] = c.group.antipodal;
  if (c.group.character_table) {
    const auto& t = *c.group.character_table;
    g["character_table"] = {{"classes", t.classes}, {"labels", t.labels}, {"rows", t.rows}};
  }
  if (!c.group.subgroup_names.empty()) {
    Json names = Json::array();
    for (const auto& [name, gens] : c.group.subgroup_names) {
      names.push_back({{"name", name}, {"generators", gens}});
    }
    g["subgroup_names"] = names;
  }
  j["group"] = g;
  Json a{{"type", c.action.type}, {"dimension", c.action.dimension}};
  if (c.action.type == "permutation") {
    a["data"] = c.action.permutations;
  } else {
    a["data"] = c.action.matrices;
  }
  j["action"] = a;
  Json l{{"a", c.linearization.a}};
  const auto& cp = c.linearization.coupling;
  if (cp.adjacency_template) {
    l["coupling_matrix"] = {
        {"template", "adjacency"}, {"c", cp.c}, {"d", cp.d}, {"adjacency", cp.adjacency}};
  } else {
    l["coupling_matrix"] = cp.matrix;
  }
  if (c.linearization.sigmoid) {
    l["zeta"] = "sigmoid";
  } else {
    l["zeta"] = {{"breakpoints", c.linearization.breakpoints}};
  }
  j["linearization"] = l;
  j["horizon"] = {{"m_max", c.m_max}, {"n_max", c.n_max}};
  j["analysis"] = {{"mode", to_string(c.analysis.mode)},
                   {"k_fixed", c.analysis.k_fixed},
                   {"alpha_bracket", c.analysis.alpha_bracket},
                   {"basis", c.analysis.basis}};
  return j;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    schema(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

std::vector<Eigen::MatrixXd> Model::gamma_matrices() const {
  std::vector<Eigen::MatrixXd> out;
  for (std::uint32_t g = 0; g < action->group().order(); ++g) out.push_back(action->matrix(g));
  return out;
}

std::vector<OrbitType> Model::maximal() const {
  std::vector<std::size_t> blocks;
  for (const auto& b : spectrum) blocks.push_back(b.j);
  return maximal_at_one(*ambient, blocks);
}

BurnsideElement Model::in_basis(const BurnsideElement& value) const {
  return config.analysis.basis == "listing" ? to_listing_basis(value) : value;
}

OrbitType Model::resolve(const std::string& text) const {
  std::vector<OrbitType> pool{ambient->unit()};
  int top = 1;
  for (const auto& cp : problem->critical_points()) top = std::max(top, cp.id.m);
  for (const auto& h : maximal()) {
    for (int s = 1; s <= top; ++s) pool.push_back(fold(h, s));
  }
  for (const auto& b : spectrum) {
    for (int m = 1; m <= top; ++m) {
      const auto deg = degrees->basic_degree({m, b.j});
      for (const auto& [h, c] : deg.value.terms()) pool.push_back(h);
    }
  }
  std::sort(pool.begin(), pool.end(), OrbitTypeLess{});
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return resolve_symbol(text, pool);
}

Model assemble(const ModelConfig& config) {
  Model model;
  model.config = config;
  const auto& gs = config.group;
  if (!gs.antipodal) {
    schema("group.antipodal must be true: the toolkit handles odd nonlinearities only");
  }
  if (gs.degree == 0 || gs.generators.empty()) schema("group needs a degree and generators");
  std::vector<Permutation> gens;
  for (const auto& text : gs.generators) {
    gens.push_back(Permutation::parse_cycles(text, gs.degree));
  }
  auto gamma = FiniteGroup::from_generators(gs.degree, gens);

  CharacterTable table;
  const bool builtin = !gs.character_table && gs.degree == 4 && gamma.order() == 24;
  if (gs.character_table) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : gs.character_table->rows) {
      std::vector<Rational> r;
      for (const auto& cell : row) r.push_back(parse_rational(cell));
      rows.push_back(std::move(r));
    }
    table = make_character_table(gamma, gs.character_table->classes, gs.character_table->labels,
                                 std::move(rows));
  } else if (builtin) {
    table = s4_character_table(gamma);
  } else {
    schema("group.character_table is required unless Gamma is S4 on 4 points");
  }
  std::vector<SubgroupName> names;
  for (const auto& [name, g] : gs.subgroup_names) names.push_back({name, g});
  if (names.empty() && builtin) names = s4z2_subgroup_names();
  model.ambient = AmbientGroup::create(std::move(gamma), std::move(table), names);

  const auto& as = config.action;
  if (as.dimension == 0) schema("action.dimension must be positive");
  std::vector<Eigen::MatrixXd> mats;
  if (as.type == "permutation") {
    for (const auto& text : as.permutations) {
      mats.push_back(permutation_matrix(Permutation::parse_cycles(text, as.dimension)));
    }
  } else {
    for (const auto& m : as.matrices) mats.push_back(to_matrix(m, "action.data"));
  }
  if (mats.size() != gs.generators.size()) {
    schema("action.data needs one entry per group generator");
  }
  model.action = std::make_shared<OrthogonalAction>(
      std::make_shared<FiniteGroup>(model.ambient->gamma()), mats);
  model.decomposition = isotypic_decompose(*model.action, model.ambient->table());
  model.multiplicities.assign(model.ambient->irrep_count(), 0);
  for (const auto& d : model.decomposition) model.multiplicities[d.irrep] = d.multiplicity;

  const auto k = static_cast<Eigen::Index>(as.dimension);
  const auto& cs = config.linearization.coupling;
  if (cs.adjacency_template) {
    model.coupling = cs.c * Eigen::MatrixXd::Identity(k, k);
    if (cs.adjacency.size() != static_cast<std::size_t>(k)) {
      schema("adjacency must be " + std::to_string(k) + " x " + std::to_string(k));
    }
    for (Eigen::Index r = 0; r < k; ++r) {
      if (cs.adjacency[r].size() != static_cast<std::size_t>(k)) schema("adjacency must be square");
      for (Eigen::Index c = 0; c < k; ++c) {
        const int e = cs.adjacency[r][c];
        if (e != 0 && e != 1) schema("adjacency entries must be 0 or 1");
        if (r != c && e == 1) model.coupling(r, c) = cs.d;
      }
    }
    if (!(cs.c > 0 && cs.d < 0 && 4 * cs.d + cs.c >= 0)) {
      model.warnings.push_back("coupling constants violate c > 0, d < 0, 4d + c >= 0");
    }
  } else {
    if (cs.matrix.size() != static_cast<std::size_t>(k)) {
      schema("coupling_matrix must be " + std::to_string(k) + " x " + std::to_string(k));
    }
    model.coupling = to_matrix(cs.matrix, "coupling_matrix");
  }
  if ((model.coupling - model.coupling.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    schema("coupling matrix is not symmetric");
  }
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const double err = (mats[i] * model.coupling - model.coupling * mats[i]).cwiseAbs().maxCoeff();
    if (err > 1e-12) {
      throw Error(ErrorCode::EquivarianceViolation,
                  "coupling matrix does not commute with generator " + gs.generators[i]);
    }
  }

  model.spectrum = coupling_spectrum(model);
  ZetaProfile zeta = config.linearization.sigmoid
                         ? ZetaProfile::sigmoid()
                         : ZetaProfile::tabulated(config.linearization.breakpoints);
  double sup = config.linearization.a;
  for (const auto& b : model.spectrum) {
    model.curves.emplace_back(b.j, config.linearization.a, b.weight, zeta);
    sup = std::max(sup, model.curves.back().codomain().second);
  }
  auto table_s = BesselZeroTable::covering(sup, config.m_max, config.n_max);
  if (table_s.m_max() != config.m_max || table_s.n_max() != config.n_max) {
    model.warnings.push_back("Bessel horizon raised to m_max=" + std::to_string(table_s.m_max()) +
                             ", n_max=" + std::to_string(table_s.n_max()));
  }
  model.degrees = std::make_shared<DegreeCache>(model.ambient);
  model.problem = std::make_shared<BifurcationProblem>(model.degrees, model.curves,
                                                       std::move(table_s), model.multiplicities,
                                                       config.analysis.k_fixed,
                                                       config.analysis.alpha_bracket);
  return model;
}

Model load_model(const std::filesystem::path& path) { return assemble(load_config(path)); }

std::vector<CouplingBlock> coupling_spectrum(const Model& model) {
  const auto& amb = *model.ambient;
  const auto& gamma = amb.gamma();
  const auto& c = model.coupling;
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  std::vector<CouplingBlock> out;
  for (std::size_t j = 0; j < model.multiplicities.size(); ++j) {
    if (model.multiplicities[j] == 0) continue;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(c.rows(), c.cols());
    for (std::uint32_t g = 0; g < gamma.order(); ++g) {
      p += boost::rational_cast<double>(amb.table().value(j, g)) * model.action->matrix(g);
    }
    p *= static_cast<double>(amb.table().degree(j)) / static_cast<double>(gamma.order());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (p + p.transpose()));
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      if (eig.eigenvalues()(i) > 0.5) cols.push_back(i);
    }
    Eigen::MatrixXd q(c.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      q.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors().col(cols[i]);
    }
    const Eigen::MatrixXd block = q.transpose() * c * q;
    const double w = block.trace() / static_cast<double>(block.rows());
    const Eigen::MatrixXd scalar = w * Eigen::MatrixXd::Identity(block.rows(), block.cols());
    if ((block - scalar).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw Error(ErrorCode::NonScalarIsotypicBlock,
                  "coupling matrix is not scalar on the isotypic component " +
                      amb.table().labels[j]);
    }
    const double snapped = std::round(w);
    out.push_back({j, std::abs(w - snapped) < 1e-9 * scale ? snapped : w, cols.size(), q});
  }
  return out;
}

Json terms_json(const BurnsideElement& value) {
  Json out = Json::array();
  for (const auto& [sym, c] : value.serialize()) out.push_back({sym, c});
  return out;
}

Json triple_json(const Triple& t) { return Json::array({t.n, t.m, t.j}); }

Triple parse_triple(const std::string& text) {
  Triple t;
  char c1 = 0;
  char c2 = 0;
  long long j = -1;
  std::istringstream in(text);
  if (!(in >> t.n >> c1 >> t.m >> c2 >> j) || c1 != ',' || c2 != ',' || t.n < 1 || t.m < 0 ||
      j < 0) {
    schema("expected an id of the form n,m,j; got '" + text + "'");
  }
  t.j = static_cast<std::size_t>(j);
  return t;
}

Json run_report(const Model& model) {
  const auto& pb = *model.problem;
  const auto mode = model.config.analysis.mode;
  const bool listing = model.config.analysis.basis == "listing";
  Json r;
  r["model"] = emit_config(model.config);
  r["basis"] = model.config.analysis.basis;
  r["mode"] = to_string(mode);
  r["k_fixed"] = pb.k_fixed();

  Json iso = Json::array();
  for (const auto& d : model.decomposition) {
    iso.push_back({{"irrep", d.irrep}, {"label", d.label}, {"multiplicity", d.multiplicity}});
  }
  r["isotypic"] = iso;
  Json spec = Json::array();
  for (const auto& b : model.spectrum) {
    spec.push_back({{"j", b.j}, {"weight", b.weight}, {"dimension", b.dimension}});
  }
  r["coupling_spectrum"] = spec;
  r["horizon"] = {{"m_max", pb.table().m_max()}, {"n_max", pb.table().n_max()}};

  Json cps = Json::array();
  for (const auto& cp : pb.critical_points()) {
    cps.push_back({{"id", triple_json(cp.id)},
                   {"alpha", cp.alpha},
                   {"zeta_level", cp.zeta_level},
                   {"s", cp.s}});
  }
  r["critical_points"] = cps;
  Json base = Json::array();
  for (const auto& t : pb.background()) base.push_back(triple_json(t));
  r["background"] = base;

  const auto points = pb.relevant_points();
  const auto maximal = model.maximal();
  Json invariants = Json::array();
  std::vector<LocalInvariant> full;
  std::vector<LocalInvariant> relative;
  Json checks = Json::array();
  Json warnings = Json::array();
  for (const auto& w : model.warnings) warnings.push_back(w);
  const auto background = pb.rho(pb.background());
  for (const auto& cp : points) {
    full.push_back(pb.local_invariant(cp, InvariantMode::Full));
    relative.push_back(pb.local_invariant(cp, InvariantMode::Relative));
    for (const auto* inv : {&full.back(), &relative.back()}) {
      invariants.push_back({{"id", triple_json(inv->id)},
                            {"mode", to_string(inv->mode)},
                            {"alpha_minus", inv->alpha_minus},
                            {"alpha_plus", inv->alpha_plus},
                            {"terms", terms_json(model.in_basis(inv->value))}});
    }
    const bool consistent = full.back().value == background * relative.back().value;
    checks.push_back({{"kind", "mode_consistency"},
                      {"id", triple_json(cp.id)},
                      {"status", consistent ? "ok" : "CrossCheckMismatch"}});
    if (!consistent) warnings.push_back("mode consistency fails at " + to_string(cp.id));
  }
  r["invariants"] = invariants;

  Json profiles = Json::array();
  Json certificates = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& cp = points[i];
    const auto& inv = mode == InvariantMode::Full ? full[i] : relative[i];
    for (const auto& h : maximal) {
      const auto p = pb.folding_profile(cp, h, mode);
      Json folds = Json::array();
      for (const auto& [s, ind] : p.indicator) {
        folds.push_back({{"s", s},
                         {"n_minus", p.n_minus.at(s)},
                         {"n_plus", p.n_plus.at(s)},
                         {"m_minus", p.m_minus.at(s)},
                         {"m_plus", p.m_plus.at(s)},
                         {"indicator", ind}});
      }
      profiles.push_back({{"id", triple_json(cp.id)},
                          {"orbit_type", symbol(h)},
                          {"s_max", p.s_max},
                          {"folds", folds}});
      if (p.s_max == 0) continue;
      const std::int64_t scale = listing && cyclic_kernel(h) ? 2 : 1;
      for (const auto& [s, ind] : p.indicator) {
        if (s < p.s_max) continue;
        const auto c = pb.check_bounded(p, inv, s);
        checks.push_back({{"kind", "bounded_closed_form"},
                          {"id", triple_json(cp.id)},
                          {"orbit_type", symbol(h)},
                          {"s", s},
                          {"closed_form", scale * c.closed_form},
                          {"brute_force", scale * c.brute_force},
                          {"status", c.agrees() ? "ok" : "CrossCheckMismatch"}});
        if (!c.agrees()) {
          warnings.push_back("closed form disagrees with the product at " + to_string(cp.id) +
                             " for " + symbol(fold(h, s)));
        }
      }
    }
    for (const auto& h : maximal_types(*model.ambient, {1, cp.id.j})) {
      std::vector<std::size_t> js;
      for (const auto& t : pb.sigma_for(inv.alpha_plus, mode)) {
        if (t.m != cp.id.m) continue;
        const auto mt = maximal_types(*model.ambient, {1, t.j});
        if (std::find(mt.begin(), mt.end(), h) != mt.end()) js.push_back(t.j);
      }
      Json entry{{"kind", "product_closed_form"},
                 {"id", triple_json(cp.id)},
                 {"orbit_type", symbol(h)},
                 {"blocks", js}};
      try {
        entry["coefficient"] = coeff_fast(*model.degrees, h, cp.id.m, js);
        entry["status"] = "ok";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CrossCheckMismatch) throw;
        entry["status"] = "CrossCheckMismatch";
        warnings.push_back(e.what());
      }
      checks.push_back(entry);
    }
    for (const auto& c : pb.branch_certificates(cp, maximal, mode)) {
      certificates.push_back({{"id", triple_json(c.id)},
                              {"alpha", c.alpha},
                              {"orbit_type", symbol(c.h)},
                              {"s", c.s},
                              {"symmetry", symbol(c.symmetry)},
                              {"coefficient", (listing && cyclic_kernel(c.symmetry) ? 2 : 1) * c.coefficient},
                              {"statement", c.statement}});
    }
  }
  r["profiles"] = profiles;
  r["checks"] = checks;
  r["certificates"] = certificates;

  Json verdicts = Json::array();
  for (const auto& h : maximal) {
    const auto v = pb.global_verdict(h, mode);
    Json members = Json::array();
    for (const auto& t : v.members) members.push_back(triple_json(t));
    verdicts.push_back({{"orbit_type", symbol(h)},
                        {"s_bar", v.s_bar},
                        {"members", members},
                        {"conclusion", to_string(v.conclusion)},
                        {"alternative", v.alternative}});
  }
  r["verdicts"] = verdicts;
  r["rabinowitz_sum"] = {{"full", terms_json(model.in_basis(rabinowitz_sum(full)))},
                         {"relative", terms_json(model.in_basis(rabinowitz_sum(relative)))}};
  if (pb.k_fixed()) {
    warnings.push_back(
        "K-fixed analysis: odd-m filter applied inside the Burnside ring of O(2) x Gamma x Z2");
  }
  r["warnings"] = warnings;
  return r;
}

}  // namespace equideg
