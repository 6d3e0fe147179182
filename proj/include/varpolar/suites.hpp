#ifndef VARPOLAR_SUITES_HPP
#define VARPOLAR_SUITES_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "varpolar/minty.hpp"
#include "varpolar/monotone_polar.hpp"

namespace varpolar {

using Json = nlohmann::ordered_json;

// Malformed configuration or flags; maps to exit status 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Suite { prop1, thm2, thm3, cdd, predicates, mvi, sanity };

const char* to_string(Suite s) noexcept;
// Accepts the suite names above; "all" expands to every suite.
std::set<Suite> parse_suites(const std::string& name);

enum class OutputFormat { json, csv, text };

const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_format(const std::string& s);

struct RunConfig {
    std::vector<std::string> functions;  // empty: whole test library
    std::optional<Region> region;        // overrides default_region for functions of matching dimension
    std::size_t grid_1d = 65;
    std::size_t grid_2d = 17;
    std::size_t t_resolution = kDefaultTResolution;
    std::size_t direction_resolution = 16;
    std::size_t covector_resolution = 81;
    std::size_t covector_resolution_nd = 21;
    std::size_t probe_refine = 4;
    LiminfScheme scheme{};
    double tol = kDefaultTol;
    double band = kDefaultBand;    // prop1 / thm2
    double polar_band = 1e-2;      // thm3
    double cdd_tol = 1e-3;
    double max_indeterminate_fraction = 0.02;
    std::set<Suite> suites{Suite::prop1, Suite::thm2, Suite::thm3, Suite::cdd, Suite::predicates, Suite::mvi,
                           Suite::sanity};
    std::optional<std::filesystem::path> out_dir;
    OutputFormat format = OutputFormat::text;

    // Throws ConfigError (unknown function ids resolve through the library).
    void validate() const;
    [[nodiscard]] std::vector<const FunctionOracle*> resolved_functions() const;
    [[nodiscard]] Region region_for(const FunctionOracle& f) const;
    [[nodiscard]] std::size_t grid_for(const FunctionOracle& f) const;
    [[nodiscard]] Json to_json() const;
};

// Reads a YAML config file:
//   functions: [abs, square]
//   region: {lo: [-2], hi: [2]}          # or {center: [..], radius: r}
//   resolution: {grid_1d, grid_2d, t, direction, covector, covector_nd, probe_refine}
//   scheme: {t0, ratio, steps, tail_fraction, tol}
//   tolerances: {tol, band, polar_band, cdd, max_indeterminate_fraction}
//   suites: [prop1, thm2]                # or a single name, or all
//   output: {dir: out, format: json}
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& yaml_text);

struct SuiteResult {
    Suite suite;
    bool pass = true;
    std::size_t hard_disagreements = 0;
    Json body;  // per-function results with witnesses
    std::vector<std::pair<std::string, std::string>> tables;  // per-point CSV (file name, content)
};

struct Report {
    Json config;
    std::vector<SuiteResult> suites;
    Json timing;  // seconds per suite; kept out of to_json()

    [[nodiscard]] bool pass() const;
    [[nodiscard]] std::size_t hard_disagreements() const;
    // Deterministic machine report, timing excluded.
    [[nodiscard]] Json to_json() const;
    [[nodiscard]] std::string summary_text() const;
    [[nodiscard]] std::string summary_csv() const;
};

// Runs the selected suites over the selected functions. Output is ordered by
// suite, then function id, then grid order, independent of thread count.
Report run_suite(const RunConfig& config);

// Individual suites, also used by the acceptance tests.
SuiteResult run_prop1(const RunConfig& config);
SuiteResult run_thm2(const RunConfig& config);
SuiteResult run_thm3(const RunConfig& config);
SuiteResult run_cdd(const RunConfig& config);
SuiteResult run_predicates(const RunConfig& config);
SuiteResult run_mvi(const RunConfig& config);
SuiteResult run_sanity(const RunConfig& config);

// Writes report.json, timing.json and summary.csv under `dir`; in csv format
// also one per-point table per suite and function. Throws std::runtime_error
// when the directory cannot be written.
void write_report(const Report& report, const RunConfig& config, const std::filesystem::path& dir);

// Dual-route setup for the polar suites: candidate pairs, the dense graph
// over the grown region Y and the IAR probe on the same grid.
struct PolarSetup {
    Region region;
    Region probe;               // Y
    std::size_t probe_resolution = 0;
    GraphSample candidates{1};
    SampledGraph dense;
    double candidate_spacing = 0.0;  // max of point and covector grid spacing
    double polar_tol = kDefaultTol;
};

PolarSetup make_polar_setup(const FunctionOracle& f, const RunConfig& config);

struct ExplainQuery {
    std::string function;
    std::optional<Vector> x;      // with xstar: polar and subdifferential routes
    std::optional<Vector> xstar;
    std::optional<Vector> xbar;   // Minty and IAR routes
};

// Single-point drill-down across all routes.
Json explain(const ExplainQuery& q, const RunConfig& config);
std::string explain_text(const Json& fragment);

// Graph and polar-candidate dumps for the `graph` and `polar` verbs.
SampledGraph dump_graph(const FunctionOracle& f, const RunConfig& config);
void write_polar_csv(std::ostream& os, const FunctionOracle& f, const RunConfig& config);

// JSON for an extended real: a number, or the string "+inf".
Json json_value(double v);
Json json_vector(const Vector& v);

}  // namespace varpolar

#endif
