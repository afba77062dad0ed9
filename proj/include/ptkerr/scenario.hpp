#ifndef PTKERR_SCENARIO_HPP
#define PTKERR_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptkerr/fock_oracle.hpp"
#include "ptkerr/nonlinear.hpp"
#include "ptkerr/table.hpp"

namespace ptkerr {

enum class EngineVariant { linear, noisy, noiseless, meanfield, oracle };

const char* to_string(EngineVariant v);
EngineVariant engine_variant_from_string(const std::string& s);

enum class SweepQuantity { change_ratio, d3 };

struct SweepSpec {
    double j_min = 0.1;
    double j_max = 0.9;
    int j_steps = 50;
    SweepQuantity quantity = SweepQuantity::change_ratio;
    double exceptional_margin = 0.02;
};

struct OracleSpec {
    int n_a = 32;
    int n_b = 32;
    double dt = 1e-3;
    double leak_threshold = 1e-6;
    int max_total_dim = 4096;
};

struct ScenarioOptions {
    bool include_eb1 = true;
    bool include_noise_wick = true;
    bool include_noise_photons = false;
    int workers = 1;
    double phi = pi / 2;
};

struct ScenarioConfig {
    CouplerParams params;  // raw; engines consume params.normalized()
    EngineVariant variant = EngineVariant::linear;
    double t_max = 1.0;
    int n_samples = 101;
    std::optional<SweepSpec> sweep;
    std::optional<OracleSpec> oracle;
    ScenarioOptions options;
    std::string output_path;      // empty = stdout
    std::string output_format = "CSV";  // CSV | JSON

    void validate() const;
    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& j);
};

// Moment time series by the requested engine (linear / noisy / noiseless /
// meanfield / oracle) on the uniform grid.
DataTable run_scenario(const ScenarioConfig& config);

// change_ratio or D3 over the (J/kappa, kappa t) grid; NaN cells carry a
// reason code in the sidecar metadata. Rows parallelize over workers with
// bit-identical results.
DataTable sweep(const ScenarioConfig& config);

struct CompareReport {
    nlohmann::json verdict;
    bool pass = true;
};

// Per-column max/mean relative error between two aligned series.
CompareReport compare(const DataTable& analytic, const DataTable& oracle,
                      const std::map<std::string, double>& tolerances,
                      double rel_floor = 1e-12);

// Named figure presets fig2..fig7; each returns the tables it generated.
std::vector<std::string> figure_names();
std::vector<DataTable> run_figure(const std::string& name,
                                  const ScenarioOptions& opts = {});

// Writes a table per its config/output settings (CSV + JSON sidecar).
void emit(const DataTable& table, const std::string& path,
          const std::string& format);

}  // namespace ptkerr

#endif
