#pragma once

#include "ekv/dynamics.hpp"
#include "ekv/hypotheses.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ekv {

// Material by registry name plus its scalar parameters.  `alpha` selects the
// thermal expansion law of the neo-Hookean materials; `transitions` lists
// (J, drop) pairs for volumetric_pt.
struct MaterialSpec {
  std::string name = "neo_hookean_thermal";
  std::map<std::string, double> params;
  std::string alpha_kind = "bounded";
  std::map<std::string, double> alpha_params;
  std::vector<std::pair<double, double>> transitions;
};

std::vector<std::string> material_names();
// Fills in every default the named material accepts; throws ValidationError
// for unknown names or parameters.
MaterialSpec complete_material_spec(MaterialSpec spec);
MaterialPtr<2> make_material(const MaterialSpec& spec, double q = 3.0);

struct OutputSettings {
  int ledger_every = 1;
  int snapshot_every = 0;  // 0: initial and final only
  bool vtk = false;
};

struct RunConfig {
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  MaterialSpec material;
  OutputSettings output;
  Scenario scenario;
};

constexpr int kMaxGalerkinOrder = 64;
constexpr int kMaxGridNodes = 512;

// Parses the YAML scenario text, applies dotted-key overrides ("a.b=v") and
// validates.  ParseError carries the line/column of the offending node;
// constraint violations raise ValidationError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Effective configuration with every default spelled out.  Parsing the echo
// reproduces it exactly.
std::string echo_config(const RunConfig& cfg);

// Material-only config used by validate-material: the same `material`
// section keys as dotted overrides plus the sampling box under `box.*`.
struct ValidationConfig {
  MaterialSpec material;
  SampleBox box;
  int samples = 200;
  std::uint64_t seed = 1;
  double q = 3.0;  // growth exponent of the dissipation law
};
ValidationConfig parse_validation_overrides(const std::string& name, const std::vector<std::string>& overrides);

}  // namespace ekv
