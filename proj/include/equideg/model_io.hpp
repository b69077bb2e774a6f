#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "equideg/bifurcation.hpp"
#include "equideg/finite_group.hpp"
#include "equideg/orbit_types.hpp"
#include "equideg/spectrum.hpp"

namespace equideg {

using Json = nlohmann::json;

struct CharacterTableSpec {
  std::vector<std::string> classes;
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> rows;  // integers or "p/q"

  bool operator==(const CharacterTableSpec&) const = default;
};

struct GroupSpec {
  std::size_t degree = 0;
  std::vector<std::string> generators;
  bool antipodal = true;
  std::optional<CharacterTableSpec> character_table;
  /// Names of subgroups of Gamma x Z2 (Z2 on points degree+1, degree+2).
  std::vector<std::pair<std::string, std::vector<std::string>>> subgroup_names;

  bool operator==(const GroupSpec&) const = default;
};

struct ActionSpec {
  std::string type = "permutation";
  std::size_t dimension = 0;
  std::vector<std::string> permutations;               // one per generator
  std::vector<std::vector<std::vector<double>>> matrices;  // one per generator

  bool operator==(const ActionSpec&) const = default;
};

struct CouplingSpec {
  bool adjacency_template = false;
  std::vector<std::vector<double>> matrix;
  double c = 0;
  double d = 0;
  std::vector<std::vector<int>> adjacency;

  bool operator==(const CouplingSpec&) const = default;
};

struct LinearizationSpec {
  double a = 0;
  CouplingSpec coupling;
  bool sigmoid = true;
  std::vector<std::pair<double, double>> breakpoints;

  bool operator==(const LinearizationSpec&) const = default;
};

struct AnalysisSpec {
  InvariantMode mode = InvariantMode::Full;
  bool k_fixed = true;
  double alpha_bracket = 1.0;
  /// "exact" or "listing" (see to_listing_basis).
  std::string basis = "listing";

  bool operator==(const AnalysisSpec&) const = default;
};

struct ModelConfig {
  std::string name;
  std::vector<std::string> notes;
  GroupSpec group;
  ActionSpec action;
  LinearizationSpec linearization;
  int m_max = 12;
  int n_max = 12;
  AnalysisSpec analysis;

  bool operator==(const ModelConfig&) const = default;
};

/// Throws SchemaError on anything that does not match the schema.
ModelConfig parse_config(const Json& j);
Json emit_config(const ModelConfig& config);
ModelConfig load_config(const std::filesystem::path& path);

struct CouplingBlock {
  std::size_t j = 0;
  double weight = 0;
  /// Dimension of the isotypic component (eigenvalue multiplicity).
  std::size_t dimension = 0;
  /// Orthonormal basis of the component, one column per vector.
  Eigen::MatrixXd basis;
};

/// Assembled model: group, action, decomposition, curves and the bifurcation
/// problem built from a validated config.
struct Model {
  ModelConfig config;
  std::shared_ptr<const AmbientGroup> ambient;
  std::shared_ptr<const OrthogonalAction> action;
  std::vector<IsotypicMultiplicity> decomposition;
  std::vector<std::int64_t> multiplicities;
  Eigen::MatrixXd coupling;
  std::vector<CouplingBlock> spectrum;
  std::vector<EigenvalueCurve> curves;
  std::shared_ptr<const DegreeCache> degrees;
  std::shared_ptr<const BifurcationProblem> problem;
  std::vector<std::string> warnings;

  /// Matrix of every element of Gamma on V, indexed like ambient->gamma().
  std::vector<Eigen::MatrixXd> gamma_matrices() const;
  /// Maximal types of V_{1,j} over the blocks present.
  std::vector<OrbitType> maximal() const;
  /// Terms in the configured coefficient basis.
  BurnsideElement in_basis(const BurnsideElement& value) const;
  /// Symbol lookup among the maximal types, their folds up to m_max and the
  /// terms of the basic degrees in use.
  OrbitType resolve(const std::string& symbol) const;
};

/// Checks (equivariance, scalar blocks, monotone curves) and assembly.
Model assemble(const ModelConfig& config);
Model load_model(const std::filesystem::path& path);

std::vector<CouplingBlock> coupling_spectrum(const Model& model);

Json terms_json(const BurnsideElement& value);
Json triple_json(const Triple& t);
Triple parse_triple(const std::string& text);

/// Whole pipeline as a JSON document. Keys are sorted, so equal inputs give
/// byte-identical dumps.
Json run_report(const Model& model);

}  // namespace equideg
