#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "equideg/error.hpp"
#include "equideg/model_io.hpp"

using namespace equideg;

namespace {

struct Options {
  std::string config;
  std::string format = "json";
  std::string out;
  int m = 1;
  std::size_t j = 0;
  std::string id;
  std::string mode = "full";
  std::string orbit_type;
  int resolution = 64;
  int m_max = 0;
  int n_max = 0;
};

void render(std::ostream& os, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_structured() && !x.empty()) {
        os << pad << k << ":\n";
        render(os, x, indent + 1);
      } else {
        os << pad << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_object()) {
        os << pad << "-\n";
        render(os, x, indent + 1);
      } else {
        os << pad << "- " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  } else {
    os << pad << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

Model need_model(const Options& o) {
  if (o.config.empty()) throw Error(ErrorCode::SchemaError, "--config is required");
  return load_model(o.config);
}

Json decompose(const Model& model) {
  Json iso = Json::array();
  for (const auto& d : model.decomposition) {
    iso.push_back({{"irrep", d.irrep}, {"label", d.label}, {"multiplicity", d.multiplicity}});
  }
  Json spec = Json::array();
  for (const auto& b : model.spectrum) {
    spec.push_back({{"j", b.j},
                    {"label", model.ambient->table().labels[b.j]},
                    {"weight", b.weight},
                    {"dimension", b.dimension}});
  }
  Json maximal = Json::array();
  for (const auto& h : model.maximal()) maximal.push_back(symbol(h));
  return {{"isotypic", iso}, {"coupling_spectrum", spec}, {"maximal_types", maximal},
          {"warnings", model.warnings}};
}

Json bessel(const Options& o) {
  int m_max = 12;
  int n_max = 12;
  if (!o.config.empty()) {
    const auto c = load_config(o.config);
    m_max = c.m_max;
    n_max = c.n_max;
  }
  if (o.m_max > 0) m_max = o.m_max;
  if (o.n_max > 0) n_max = o.n_max;
  const auto table = BesselZeroTable::build(m_max, n_max);
  Json rows = Json::array();
  for (int m = 0; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      rows.push_back({{"m", m}, {"n", n}, {"zero", std::sqrt(table.s(m, n))}, {"s", table.s(m, n)}});
    }
  }
  return {{"m_max", m_max}, {"n_max", n_max}, {"zeros", rows}};
}

Json critical(const Model& model) {
  const auto relevant = model.problem->relevant_points();
  Json out = Json::array();
  for (const auto& cp : model.problem->critical_points()) {
    bool rel = false;
    for (const auto& r : relevant) rel = rel || r.id == cp.id;
    out.push_back({{"id", triple_json(cp.id)},
                   {"alpha", cp.alpha},
                   {"zeta_level", cp.zeta_level},
                   {"s", cp.s},
                   {"relevant", rel}});
  }
  return {{"critical_points", out}, {"k_fixed", model.problem->k_fixed()}};
}

Json basic_degree_cmd(const Options& o, std::string& text) {
  std::optional<Model> model;
  std::shared_ptr<const DegreeCache> cache;
  std::string basis = "listing";
  if (!o.config.empty()) {
    model = need_model(o);
    cache = model->degrees;
    basis = model->config.analysis.basis;
  } else {
    cache = std::make_shared<DegreeCache>(s4_ambient());
  }
  if (o.j >= cache->ambient().irrep_count()) {
    throw Error(ErrorCode::SchemaError, "irrep index out of range");
  }
  const auto deg = cache->basic_degree({o.m, o.j});
  const auto value = basis == "listing" ? to_listing_basis(deg.value) : deg.value;
  text = "deg_{" + std::to_string(o.m) + "," + std::to_string(o.j) + "} = " +
         value.to_string(true) + "\n";
  return {{"m", o.m}, {"j", o.j}, {"basis", basis}, {"terms", terms_json(value)}};
}

Json invariant_cmd(const Model& model, const Options& o, std::string& text) {
  const auto& pb = *model.problem;
  const bool listing = model.config.analysis.basis == "listing";
  if (o.mode == "global") {
    std::vector<OrbitType> hs;
    if (o.orbit_type.empty()) {
      hs = model.maximal();
    } else {
      hs.push_back(model.resolve(o.orbit_type));
    }
    const auto mode = model.config.analysis.mode;
    Json out = Json::array();
    std::ostringstream t;
    for (const auto& h : hs) {
      const auto v = pb.global_verdict(h, mode);
      Json members = Json::array();
      for (const auto& id : v.members) members.push_back(triple_json(id));
      out.push_back({{"orbit_type", symbol(h)},
                     {"s_bar", v.s_bar},
                     {"members", members},
                     {"conclusion", to_string(v.conclusion)},
                     {"alternative", v.alternative}});
      t << pretty_symbol(h) << ": s_bar=" << v.s_bar << ", " << v.members.size()
        << " member(s), " << to_string(v.conclusion) << "\n";
      if (!v.alternative.empty()) t << "  " << v.alternative << "\n";
    }
    text = t.str();
    return {{"mode", to_string(mode)}, {"verdicts", out}};
  }
  const auto mode = parse_mode(o.mode);
  if (o.id.empty()) throw Error(ErrorCode::SchemaError, "--id is required");
  const auto& cp = pb.point(parse_triple(o.id));
  const auto inv = pb.local_invariant(cp, mode);
  const auto value = model.in_basis(inv.value);
  Json out{{"id", triple_json(cp.id)},
           {"alpha", cp.alpha},
           {"mode", to_string(mode)},
           {"k_fixed", pb.k_fixed()},
           {"basis", model.config.analysis.basis},
           {"alpha_minus", inv.alpha_minus},
           {"alpha_plus", inv.alpha_plus},
           {"terms", terms_json(value)}};
  std::ostringstream t;
  t << "omega" << to_string(cp.id) << " (" << to_string(mode) << ", alpha in [" << inv.alpha_minus
    << ", " << inv.alpha_plus << "]) = " << value.to_string(true) << "\n";
  if (!o.orbit_type.empty()) {
    const auto h = model.resolve(o.orbit_type);
    const auto p = pb.folding_profile(cp, h, mode);
    Json folds = Json::array();
    for (const auto& [s, ind] : p.indicator) {
      folds.push_back({{"s", s},
                       {"n_minus", p.n_minus.at(s)},
                       {"n_plus", p.n_plus.at(s)},
                       {"m_minus", p.m_minus.at(s)},
                       {"m_plus", p.m_plus.at(s)},
                       {"indicator", ind}});
      t << "  s=" << s << " n-=" << p.n_minus.at(s) << " n+=" << p.n_plus.at(s)
        << " m-=" << p.m_minus.at(s) << " m+=" << p.m_plus.at(s) << " i=" << ind << "\n";
    }
    Json profile{{"orbit_type", symbol(h)}, {"s_max", p.s_max}, {"folds", folds}};
    if (p.s_max > 0) {
      const auto c = pb.check_bounded(p, inv, p.s_max);
      const std::int64_t scale = listing && cyclic_kernel(h) ? 2 : 1;
      profile["closed_form"] = scale * c.closed_form;
      profile["brute_force"] = scale * c.brute_force;
      profile["status"] = c.agrees() ? "ok" : "CrossCheckMismatch";
      t << "  s_max=" << p.s_max << " closed form " << scale * c.closed_form << ", product "
        << scale * c.brute_force << (c.agrees() ? "" : "  [CrossCheckMismatch]") << "\n";
    } else {
      t << "  no folding with a nonzero indicator\n";
    }
    out["profile"] = profile;
  }
  text = t.str();
  return out;
}

std::string kernel_grid(const Model& model, const Options& o) {
  if (o.id.empty()) throw Error(ErrorCode::SchemaError, "--id is required");
  if (o.resolution < 2) throw Error(ErrorCode::SchemaError, "--resolution must be at least 2");
  const auto& cp = model.problem->point(parse_triple(o.id));
  const CouplingBlock* block = nullptr;
  for (const auto& b : model.spectrum) {
    if (b.j == cp.id.j) block = &b;
  }
  if (block == nullptr) throw Error(ErrorCode::SchemaError, "no isotypic block for that id");
  const auto h = o.orbit_type.empty() ? model.ambient->unit() : model.resolve(o.orbit_type);
  const auto basis = fixed_mode_basis(h, cp.id.m, block->basis, model.gamma_matrices());
  if (basis.cols() == 0) {
    throw Error(ErrorCode::TrivialFixedSpace,
                "no kernel vector at " + to_string(cp.id) + " is fixed by " + symbol(h));
  }
  Eigen::VectorXd v = basis.col(0).normalized();
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  if (v(lead) < 0) v = -v;
  const auto mode = make_mode(cp, v);
  std::ostringstream os;
  os << "r,theta";
  for (Eigen::Index i = 0; i < mode.a.size(); ++i) os << ",u" << i + 1;
  os << "\n" << std::setprecision(12);
  for (const auto& s : sample_grid(mode, o.resolution)) {
    os << s.r << "," << s.theta;
    for (Eigen::Index i = 0; i < s.value.size(); ++i) os << "," << s.value(i);
    os << "\n";
  }
  return os.str();
}

void emit(const Options& o, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(ErrorCode::SchemaError, "cannot write " + o.out);
  f << payload;
}

std::string format(const Options& o, const Json& j, const std::string& text) {
  if (o.format == "json") return j.dump(2) + "\n";
  if (!text.empty()) return text;
  std::ostringstream os;
  render(os, j, 0);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant degree toolkit for coupled membrane systems"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "model configuration (JSON)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", o.out, "write the output to a file");

  auto* dec = app.add_subcommand("decompose", "isotypic decomposition and coupling spectrum");
  auto* bes = app.add_subcommand("bessel", "squared zeros of the Bessel functions");
  bes->add_option("--m-max", o.m_max, "largest order");
  bes->add_option("--n-max", o.n_max, "zeros per order");
  auto* crit = app.add_subcommand("critical-points", "crossings of the eigenvalue curves");
  auto* bd = app.add_subcommand("basic-degree", "basic degree deg_{m,j}");
  bd->add_option("--m", o.m, "Fourier mode")->required()->check(CLI::Range(0, 200));
  bd->add_option("--j", o.j, "isotypic index")->required();
  auto* inv = app.add_subcommand("invariant", "local invariant or global verdict");
  inv->add_option("--id", o.id, "critical point n,m,j");
  inv->add_option("--mode", o.mode, "full, relative or global")
      ->check(CLI::IsMember({"full", "relative", "global"}));
  inv->add_option("--orbit-type", o.orbit_type, "orbit type symbol");
  auto* rep = app.add_subcommand("report", "full analysis");
  auto* ker = app.add_subcommand("kernel-grid", "kernel vector sampled on the disk (CSV)");
  ker->add_option("--id", o.id, "critical point n,m,j")->required();
  ker->add_option("--orbit-type", o.orbit_type, "orbit type symbol");
  ker->add_option("--resolution", o.resolution, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string text;
    if (dec->parsed()) {
      emit(o, format(o, decompose(need_model(o)), ""));
    } else if (bes->parsed()) {
      emit(o, format(o, bessel(o), ""));
    } else if (crit->parsed()) {
      emit(o, format(o, critical(need_model(o)), ""));
    } else if (bd->parsed()) {
      const auto j = basic_degree_cmd(o, text);
      emit(o, format(o, j, text));
    } else if (inv->parsed()) {
      const auto model = need_model(o);
      const auto j = invariant_cmd(model, o, text);
      emit(o, format(o, j, text));
    } else if (rep->parsed()) {
      emit(o, format(o, run_report(need_model(o)), ""));
    } else if (ker->parsed()) {
      emit(o, kernel_grid(need_model(o), o));
    }
  } catch (const Error& e) {
    std::cerr << "equideg: " << e.what() << "\n";
    return is_config_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "equideg: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
