#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varpolar/library.hpp"
#include "varpolar/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitDisagreement = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string config;
    std::vector<std::string> functions;
    std::vector<std::string> suites;
    std::optional<std::size_t> resolution;
    std::optional<double> tol;
    std::string out;
    std::string format;
};

void add_common(CLI::App& cmd, CommonFlags& f, bool with_suite) {
    cmd.add_option("--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
    cmd.add_option("--function", f.functions, "Test-library function id (repeatable)")->delimiter(',');
    if (with_suite)
        cmd.add_option("--suite", f.suites, "prop1, thm2, thm3, cdd, predicates, mvi, sanity or all")->delimiter(',');
    cmd.add_option("--resolution", f.resolution, "Grid points per axis (all dimensions)");
    cmd.add_option("--tol", f.tol, "Verdict tolerance");
    cmd.add_option("--out", f.out, "Output directory");
    cmd.add_option("--format", f.format, "json, csv or text");
}

varpolar::RunConfig build_config(const CommonFlags& f) {
    varpolar::RunConfig c = f.config.empty() ? varpolar::RunConfig{} : varpolar::load_config(f.config);
    if (!f.functions.empty()) c.functions = f.functions;
    if (!f.suites.empty()) {
        c.suites.clear();
        for (const auto& s : f.suites) c.suites.merge(varpolar::parse_suites(s));
    }
    if (f.resolution) c.grid_1d = c.grid_2d = *f.resolution;
    if (f.tol) c.tol = *f.tol;
    if (!f.out.empty()) c.out_dir = f.out;
    if (!f.format.empty()) c.format = varpolar::parse_format(f.format);
    c.validate();
    return c;
}

std::optional<varpolar::Vector> as_vector(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return varpolar::Vector(v);
}

const varpolar::FunctionOracle& single_function(const varpolar::RunConfig& c, const char* verb) {
    if (c.functions.size() != 1)
        throw varpolar::ConfigError(std::string(verb) + ": select exactly one function with --function");
    return varpolar::find_function(c.functions.front());
}

std::ofstream open_output(const varpolar::RunConfig& c, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(*c.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + c.out_dir->string());
    std::ofstream out(*c.out_dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (*c.out_dir / name).string());
    return out;
}

int run_suite_verb(const CommonFlags& flags) {
    const auto config = build_config(flags);
    const auto report = varpolar::run_suite(config);
    if (config.out_dir) varpolar::write_report(report, config, *config.out_dir);
    switch (config.format) {
        case varpolar::OutputFormat::json: std::cout << report.to_json().dump(2) << "\n"; break;
        case varpolar::OutputFormat::csv: std::cout << report.summary_csv(); break;
        case varpolar::OutputFormat::text: std::cout << report.summary_text(); break;
    }
    return report.pass() ? kExitPass : kExitDisagreement;
}

int run_explain_verb(const CommonFlags& flags, const std::vector<double>& x, const std::vector<double>& xstar,
                     const std::vector<double>& xbar) {
    const auto config = build_config(flags);
    const auto& f = single_function(config, "explain");
    const auto fragment = varpolar::explain({f.id, as_vector(x), as_vector(xstar), as_vector(xbar)}, config);
    const std::string text = config.format == varpolar::OutputFormat::text ? varpolar::explain_text(fragment)
                                                                           : fragment.dump(2) + "\n";
    if (config.out_dir) open_output(config, "explain_" + f.id + ".json") << fragment.dump(2) << "\n";
    std::cout << text;
    return kExitPass;
}

int run_graph_verb(const CommonFlags& flags) {
    const auto config = build_config(flags);
    const auto& f = single_function(config, "graph");
    const auto g = varpolar::dump_graph(f, config);
    if (config.out_dir) {
        auto csv = open_output(config, "graph_" + f.id + ".csv");
        varpolar::write_graph_csv(csv, g.graph);
        auto meta = open_output(config, "graph_" + f.id + ".meta.json");
        varpolar::write_graph_meta(meta, g.meta);
    } else {
        varpolar::write_graph_csv(std::cout, g.graph);
    }
    return kExitPass;
}

int run_polar_verb(const CommonFlags& flags) {
    const auto config = build_config(flags);
    const auto& f = single_function(config, "polar");
    if (config.out_dir) {
        auto csv = open_output(config, "polar_" + f.id + ".csv");
        varpolar::write_polar_csv(csv, f, config);
    } else {
        varpolar::write_polar_csv(std::cout, f, config);
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minty variational inequalities, increase along rays and monotone polars"};
    app.require_subcommand(1);

    CommonFlags suite_flags, explain_flags, graph_flags, polar_flags;
    auto* suite = app.add_subcommand("suite", "Run the configured verification suites");
    add_common(*suite, suite_flags, true);

    std::vector<double> x, xstar, xbar;
    auto* expl = app.add_subcommand("explain", "Single-point drill-down across all routes");
    add_common(*expl, explain_flags, false);
    expl->add_option("--x", x, "Point x (comma separated)")->delimiter(',');
    expl->add_option("--xstar", xstar, "Covector x* (comma separated)")->delimiter(',');
    expl->add_option("--xbar", xbar, "Candidate Minty solution (comma separated)")->delimiter(',');

    auto* graph = app.add_subcommand("graph", "Dump a sampled subdifferential graph as CSV");
    add_common(*graph, graph_flags, false);
    auto* polar = app.add_subcommand("polar", "Dump polar candidates with both membership routes as CSV");
    add_common(*polar, polar_flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (suite->parsed()) return run_suite_verb(suite_flags);
        if (expl->parsed()) return run_explain_verb(explain_flags, x, xstar, xbar);
        if (graph->parsed()) return run_graph_verb(graph_flags);
        if (polar->parsed()) return run_polar_verb(polar_flags);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
