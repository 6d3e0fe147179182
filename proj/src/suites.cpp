#include "varpolar/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "varpolar/library.hpp"
#include "varpolar/parallel.hpp"

namespace varpolar {

namespace {

constexpr double kPolarCovectorBound1d = 5.0;
constexpr double kPolarCovectorBound2d = 2.0;
constexpr std::size_t kPolarPoints1d = 17;
constexpr std::size_t kPolarCovectors1d = 21;
constexpr std::size_t kPolarPointsNd = 5;
constexpr std::size_t kPolarCovectorsNd = 5;
constexpr std::size_t kPolarGrowCells = 2;
constexpr std::size_t kMviGrid = 9;
constexpr std::size_t kSanityGrid1d = 17;
constexpr std::size_t kSanityGridNd = 9;
constexpr std::size_t kSanityDirsNd = 8;
constexpr double kSanityExactTol = 1e-4;
constexpr double kHomogeneityRelTol = 1e-8;
constexpr double kDominanceTol = 1e-6;
constexpr std::size_t kMinPolarCandidates = 200;
constexpr std::size_t kMinMviWitnesses = 100;
constexpr std::size_t kMinSanityCases = 500;

Json witness_json(const Witness& w) {
    Json j = Json::object();
    if (w.point) j["point"] = json_vector(*w.point);
    if (w.covector) j["covector"] = json_vector(*w.covector);
    if (w.parameter) j["parameter"] = json_value(*w.parameter);
    if (w.other_point) j["other_point"] = json_vector(*w.other_point);
    if (w.other_covector) j["other_covector"] = json_vector(*w.other_covector);
    return j;
}

Json minty_json(const MintyReport& r) {
    return Json{{"solution", r.solution},
                {"residual", json_value(r.residual.raw())},
                {"witness", witness_json(r.witness)},
                {"probe", {{"region", r.probe.region},
                           {"resolution", r.probe.resolution},
                           {"t_resolution", r.probe.t_resolution}}}};
}

Json counts_json(std::size_t agree, std::size_t indeterminate, std::size_t disagree) {
    return Json{{"agree", agree}, {"indeterminate", indeterminate}, {"disagree", disagree}};
}

std::string csv_number(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string csv_header(const char* prefix, std::size_t dim) {
    std::string s;
    for (std::size_t i = 0; i < dim; ++i) s += std::string(i ? "," : "") + prefix + std::to_string(i + 1);
    return s;
}

std::string csv_coords(const Vector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.dim(); ++i) s += (i ? "," : "") + csv_number(v[i]);
    return s;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

GraphSamplingParams sampling_params(const RunConfig& c) {
    GraphSamplingParams p;
    p.covector_resolution = c.covector_resolution;
    p.covector_resolution_nd = c.covector_resolution_nd;
    p.dir_resolution = c.direction_resolution;
    p.scheme = c.scheme;
    p.tol = c.tol;
    return p;
}

CrossValidationParams cv_params(const FunctionOracle& f, const RunConfig& c) {
    CrossValidationParams p;
    p.resolution = c.grid_for(f);
    p.t_resolution = c.t_resolution;
    p.probe_refine = c.probe_refine;
    p.scheme = c.scheme;
    p.sampling = sampling_params(c);
    p.tol = c.tol;
    p.band = c.band;
    return p;
}

std::size_t grid_cardinality(const Region& r, std::size_t resolution) { return sample_region(r, resolution).size(); }

std::vector<EquivalenceReport> cross_validate_all(const RunConfig& c) {
    std::vector<EquivalenceReport> out;
    for (const FunctionOracle* f : c.resolved_functions())
        out.push_back(cross_validate(*f, c.region_for(*f), cv_params(*f, c)));
    return out;
}

SuiteResult prop1_from(const std::vector<EquivalenceReport>& reports, const RunConfig& c) {
    SuiteResult res{Suite::prop1, true, 0, Json::object(), {}};
    res.body["theorem"] = "minty_subderivative_vs_iar";
    Json funcs = Json::array();
    for (const auto& rep : reports) {
        const FunctionOracle& f = find_function(rep.function_id);
        const std::size_t grid = grid_cardinality(c.region_for(f), c.grid_for(f));
        const std::size_t agree = rep.count_prop1(Agreement::agree);
        const std::size_t ind = rep.count_prop1(Agreement::indeterminate);
        const std::size_t dis = rep.count_prop1(Agreement::disagree);
        const double frac = grid == 0 ? 0.0 : double(ind) / double(grid);
        const bool pass = dis == 0 && frac <= c.max_indeterminate_fraction;
        Json rows_dis = Json::array(), rows_ind = Json::array();
        std::size_t solutions = 0;
        std::string table = csv_header("xbar_", f.dim) + ",minty_solution,minty_residual,iar_solution,iar_residual,agreement\n";
        for (const auto& r : rep.rows) {
            if (r.iar_closed.solution) ++solutions;
            table += csv_coords(r.xbar) + "," + (r.subderivative.solution ? "1" : "0") + "," +
                     csv_number(r.subderivative.residual.raw()) + "," + (r.iar_closed.solution ? "1" : "0") + "," +
                     csv_number(r.iar_closed.residual.raw()) + "," + to_string(r.prop1) + "\n";
            if (r.prop1 == Agreement::agree) continue;
            Json row{{"xbar", json_vector(r.xbar)}, {"minty", minty_json(r.subderivative)}, {"iar", minty_json(r.iar_closed)}};
            (r.prop1 == Agreement::disagree ? rows_dis : rows_ind).push_back(std::move(row));
        }
        res.hard_disagreements += dis;
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", rep.function_id},
                             {"region", rep.region},
                             {"grid_points", grid},
                             {"outside_domain", grid - rep.rows.size()},
                             {"counts", counts_json(agree, ind, dis)},
                             {"solutions", solutions},
                             {"indeterminate_fraction", frac},
                             {"pass", pass},
                             {"disagreements", rows_dis},
                             {"indeterminate", rows_ind}});
        res.tables.emplace_back("prop1_" + rep.function_id + ".csv", std::move(table));
    }
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

SuiteResult thm2_from(const std::vector<EquivalenceReport>& reports, const RunConfig& c) {
    SuiteResult res{Suite::thm2, true, 0, Json::object(), {}};
    res.body["theorem"] = "minty_subdifferential_vs_iar";
    Json funcs = Json::array();
    for (const auto& rep : reports) {
        const FunctionOracle& f = find_function(rep.function_id);
        const std::size_t grid = rep.thm2_rows();
        const std::size_t agree = rep.count_thm2(Agreement::agree);
        const std::size_t ind = rep.count_thm2(Agreement::indeterminate);
        const std::size_t dis = rep.count_thm2(Agreement::disagree);
        const double frac = grid == 0 ? 0.0 : double(ind) / double(grid);
        const bool pass = dis == 0 && frac <= c.max_indeterminate_fraction;
        Json rows_dis = Json::array(), rows_ind = Json::array();
        std::size_t solutions = 0;
        std::string table = csv_header("xbar_", f.dim) + ",minty_solution,minty_residual,iar_solution,iar_residual,agreement\n";
        for (const auto& r : rep.rows) {
            if (!r.thm2) continue;
            if (r.iar_open->solution) ++solutions;
            table += csv_coords(r.xbar) + "," + (r.subdifferential->solution ? "1" : "0") + "," +
                     csv_number(r.subdifferential->residual.raw()) + "," + (r.iar_open->solution ? "1" : "0") + "," +
                     csv_number(r.iar_open->residual.raw()) + "," + to_string(*r.thm2) + "\n";
            if (*r.thm2 == Agreement::agree) continue;
            Json row{{"xbar", json_vector(r.xbar)},
                     {"minty", minty_json(*r.subdifferential)},
                     {"iar", minty_json(*r.iar_open)}};
            (*r.thm2 == Agreement::disagree ? rows_dis : rows_ind).push_back(std::move(row));
        }
        res.hard_disagreements += dis;
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", rep.function_id},
                             {"open_region", rep.open_region},
                             {"graph_source", to_string(rep.params.source.value_or(preferred_source(f)))},
                             {"graph_truncated", rep.graph_truncated},
                             {"covector_bound", rep.params.sampling.covector_bound},
                             {"interior_points", grid},
                             {"counts", counts_json(agree, ind, dis)},
                             {"solutions", solutions},
                             {"indeterminate_fraction", frac},
                             {"pass", pass},
                             {"disagreements", rows_dis},
                             {"indeterminate", rows_ind}});
        res.tables.emplace_back("thm2_" + rep.function_id + ".csv", std::move(table));
    }
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

struct PolarRow {
    GraphPair candidate;
    PolarVerdict polar;
    Verdict iar;
    Agreement agreement = Agreement::agree;
};

std::vector<PolarRow> polar_rows(const FunctionOracle& f, const PolarSetup& s, const RunConfig& c) {
    const auto& cands = s.candidates.pairs();
    std::vector<std::optional<PolarRow>> slots(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) {
        PolarRow r{cands[i], polar_contains(s.dense.graph, cands[i].point, cands[i].covector, s.polar_tol),
                   polar_membership_via_iar(f, cands[i].point, cands[i].covector, s.probe, s.probe_resolution,
                                            c.t_resolution, c.tol),
                   Agreement::agree};
        if (r.polar.related != r.iar.holds) {
            const double margin = std::min(std::abs(r.polar.min_product), std::abs(r.iar.residual));
            r.agreement = margin <= c.polar_band ? Agreement::indeterminate : Agreement::disagree;
        }
        slots[i] = std::move(r);
    });
    std::vector<PolarRow> rows;
    rows.reserve(slots.size());
    for (auto& r : slots) rows.push_back(std::move(*r));
    return rows;
}

Json polar_row_json(const PolarRow& r) {
    Json j{{"point", json_vector(r.candidate.point)},
           {"covector", json_vector(r.candidate.covector)},
           {"polar_related", r.polar.related},
           {"min_product", json_value(r.polar.min_product)},
           {"iar_holds", r.iar.holds},
           {"iar_residual", json_value(r.iar.residual)},
           {"iar_witness", witness_json(r.iar.witness)}};
    if (r.polar.witness)
        j["polar_witness"] = Json{{"point", json_vector(r.polar.witness->point)},
                                  {"covector", json_vector(r.polar.witness->covector)}};
    return j;
}

bool nearly_equal_rel(ExtReal a, ExtReal b, double rel) {
    if (a.is_infinite() || b.is_infinite()) return a == b;
    return std::abs(a.raw() - b.raw()) <= rel * std::max({1.0, std::abs(a.raw()), std::abs(b.raw())});
}

std::size_t as_size(const YAML::Node& n, const char* key) {
    try {
        const long long v = n.as<long long>();
        if (v < 0) throw ConfigError(std::string("config: ") + key + " must be nonnegative");
        return static_cast<std::size_t>(v);
    } catch (const YAML::Exception&) {
        throw ConfigError(std::string("config: ") + key + " must be an integer");
    }
}

double as_double(const YAML::Node& n, const char* key) {
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        throw ConfigError(std::string("config: ") + key + " must be a number");
    }
}

Vector as_vector(const YAML::Node& n, const char* key) {
    if (!n.IsSequence() || n.size() == 0) throw ConfigError(std::string("config: ") + key + " must be a nonempty list");
    std::vector<double> v;
    for (const auto& e : n) v.push_back(as_double(e, key));
    try {
        return Vector(v);
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("config: ") + key + ": " + e.what());
    }
}

Region parse_region(const YAML::Node& n) {
    try {
        if (n["lo"] || n["hi"]) {
            if (!n["lo"] || !n["hi"]) throw ConfigError("config: region needs both lo and hi");
            return Region::box(as_vector(n["lo"], "region.lo"), as_vector(n["hi"], "region.hi"));
        }
        if (n["center"]) {
            if (!n["radius"]) throw ConfigError("config: ball region needs a radius");
            return Region::ball(as_vector(n["center"], "region.center"), as_double(n["radius"], "region.radius"));
        }
        if (n["full"]) {
            const double bound = n["bound"] ? as_double(n["bound"], "region.bound") : kDefaultTruncationBound;
            return Region::full(as_size(n["full"], "region.full"), bound);
        }
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("config: malformed region: ") + e.what());
    } catch (const std::invalid_argument& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError(std::string("config: malformed region: ") + e.what());
    }
    throw ConfigError("config: region must give lo/hi, center/radius or full");
}

void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!n.IsMap()) throw ConfigError("config: " + where + " must be a mapping");
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

}  // namespace

Json json_value(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

Json json_vector(const Vector& v) {
    Json j = Json::array();
    for (double c : v.coords()) j.push_back(c);
    return j;
}

const char* to_string(Suite s) noexcept {
    switch (s) {
        case Suite::prop1: return "prop1";
        case Suite::thm2: return "thm2";
        case Suite::thm3: return "thm3";
        case Suite::cdd: return "cdd";
        case Suite::predicates: return "predicates";
        case Suite::mvi: return "mvi";
        case Suite::sanity: return "sanity";
    }
    return "?";
}

std::set<Suite> parse_suites(const std::string& name) {
    static const Suite all[] = {Suite::prop1, Suite::thm2, Suite::thm3, Suite::cdd,
                                Suite::predicates, Suite::mvi, Suite::sanity};
    if (name == "all") return {std::begin(all), std::end(all)};
    for (Suite s : all)
        if (name == to_string(s)) return {s};
    throw ConfigError("unknown suite '" + name + "'");
}

const char* to_string(OutputFormat f) noexcept {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::text: return "text";
    }
    return "?";
}

OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    if (s == "text") return OutputFormat::text;
    throw ConfigError("unknown format '" + s + "'");
}

void RunConfig::validate() const {
    (void)resolved_functions();
    if (grid_1d < 2 || grid_2d < 2 || t_resolution < 2) throw ConfigError("config: resolutions must be >= 2");
    if (covector_resolution < 2 || covector_resolution_nd < 2) throw ConfigError("config: covector resolutions must be >= 2");
    if (direction_resolution < 1) throw ConfigError("config: direction resolution must be >= 1");
    if (probe_refine < 1) throw ConfigError("config: probe_refine must be >= 1");
    for (double t : {tol, band, polar_band, cdd_tol})
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("config: tolerances must be finite and > 0");
    if (!(max_indeterminate_fraction >= 0.0 && max_indeterminate_fraction <= 1.0))
        throw ConfigError("config: max_indeterminate_fraction must lie in [0, 1]");
    if (suites.empty()) throw ConfigError("config: no suite selected");
    try {
        scheme.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (region) {
        const auto fs = resolved_functions();
        if (std::none_of(fs.begin(), fs.end(), [&](const FunctionOracle* f) { return f->dim == region->dim(); }))
            throw ConfigError("config: region dimension matches no selected function");
    }
}

std::vector<const FunctionOracle*> RunConfig::resolved_functions() const {
    std::vector<const FunctionOracle*> out;
    std::vector<std::string> ids = functions.empty() ? library_ids() : functions;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (const auto& id : ids) {
        try {
            out.push_back(&find_function(id));
        } catch (const UnknownFunctionError& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

Region RunConfig::region_for(const FunctionOracle& f) const {
    if (region && region->dim() == f.dim) return *region;
    return default_region(f);
}

std::size_t RunConfig::grid_for(const FunctionOracle& f) const { return f.dim == 1 ? grid_1d : grid_2d; }

Json RunConfig::to_json() const {
    Json ids = Json::array();
    for (const FunctionOracle* f : resolved_functions()) ids.push_back(f->id);
    Json ss = Json::array();
    for (Suite s : suites) ss.push_back(to_string(s));
    return Json{{"functions", ids},
                {"region", region ? Json(region->describe()) : Json("default")},
                {"resolution", {{"grid_1d", grid_1d},
                                {"grid_2d", grid_2d},
                                {"t", t_resolution},
                                {"direction", direction_resolution},
                                {"covector", covector_resolution},
                                {"covector_nd", covector_resolution_nd},
                                {"probe_refine", probe_refine}}},
                {"scheme", {{"t0", scheme.t0},
                            {"ratio", scheme.ratio},
                            {"steps", scheme.steps},
                            {"tail_fraction", scheme.tail_fraction}}},
                {"tolerances", {{"tol", tol},
                                {"band", band},
                                {"polar_band", polar_band},
                                {"cdd", cdd_tol},
                                {"max_indeterminate_fraction", max_indeterminate_fraction}}},
                {"covector_truncation_bound", kDefaultTruncationBound},
                {"suites", ss}};
}

RunConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML parse error: ") + e.what());
    }
    RunConfig c;
    if (root.IsNull()) return c;
    check_keys(root, {"functions", "region", "resolution", "scheme", "tolerances", "suites", "output"}, "top level");
    if (const auto n = root["functions"]) {
        c.functions.clear();
        if (n.IsScalar()) {
            c.functions.push_back(n.as<std::string>());
        } else if (n.IsSequence()) {
            for (const auto& e : n) c.functions.push_back(e.as<std::string>());
        } else {
            throw ConfigError("config: functions must be a name or a list");
        }
    }
    if (const auto n = root["region"]) c.region = parse_region(n);
    if (const auto n = root["resolution"]) {
        check_keys(n, {"grid", "grid_1d", "grid_2d", "t", "direction", "covector", "covector_nd", "probe_refine"},
                   "resolution");
        if (n["grid"]) c.grid_1d = c.grid_2d = as_size(n["grid"], "resolution.grid");
        if (n["grid_1d"]) c.grid_1d = as_size(n["grid_1d"], "resolution.grid_1d");
        if (n["grid_2d"]) c.grid_2d = as_size(n["grid_2d"], "resolution.grid_2d");
        if (n["t"]) c.t_resolution = as_size(n["t"], "resolution.t");
        if (n["direction"]) c.direction_resolution = as_size(n["direction"], "resolution.direction");
        if (n["covector"]) c.covector_resolution = as_size(n["covector"], "resolution.covector");
        if (n["covector_nd"]) c.covector_resolution_nd = as_size(n["covector_nd"], "resolution.covector_nd");
        if (n["probe_refine"]) c.probe_refine = as_size(n["probe_refine"], "resolution.probe_refine");
    }
    if (const auto n = root["scheme"]) {
        check_keys(n, {"t0", "ratio", "steps", "tail_fraction", "tol"}, "scheme");
        if (n["t0"]) c.scheme.t0 = as_double(n["t0"], "scheme.t0");
        if (n["ratio"]) c.scheme.ratio = as_double(n["ratio"], "scheme.ratio");
        if (n["steps"]) c.scheme.steps = as_size(n["steps"], "scheme.steps");
        if (n["tail_fraction"]) c.scheme.tail_fraction = as_double(n["tail_fraction"], "scheme.tail_fraction");
        if (n["tol"]) c.tol = as_double(n["tol"], "scheme.tol");
    }
    if (const auto n = root["tolerances"]) {
        check_keys(n, {"tol", "band", "polar_band", "cdd", "max_indeterminate_fraction"}, "tolerances");
        if (n["tol"]) c.tol = as_double(n["tol"], "tolerances.tol");
        if (n["band"]) c.band = as_double(n["band"], "tolerances.band");
        if (n["polar_band"]) c.polar_band = as_double(n["polar_band"], "tolerances.polar_band");
        if (n["cdd"]) c.cdd_tol = as_double(n["cdd"], "tolerances.cdd");
        if (n["max_indeterminate_fraction"])
            c.max_indeterminate_fraction = as_double(n["max_indeterminate_fraction"], "tolerances.max_indeterminate_fraction");
    }
    if (const auto n = root["suites"]) {
        c.suites.clear();
        if (n.IsScalar()) {
            c.suites = parse_suites(n.as<std::string>());
        } else if (n.IsSequence()) {
            for (const auto& e : n) c.suites.merge(parse_suites(e.as<std::string>()));
        } else {
            throw ConfigError("config: suites must be a name or a list");
        }
    }
    if (const auto n = root["output"]) {
        check_keys(n, {"dir", "format"}, "output");
        if (n["dir"]) c.out_dir = n["dir"].as<std::string>();
        if (n["format"]) c.format = parse_format(n["format"].as<std::string>());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool Report::pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

std::size_t Report::hard_disagreements() const {
    std::size_t n = 0;
    for (const auto& s : suites) n += s.hard_disagreements;
    return n;
}

Json Report::to_json() const {
    Json ss = Json::object();
    for (const auto& s : suites) {
        Json b = s.body;
        b["hard_disagreements"] = s.hard_disagreements;
        ss[to_string(s.suite)] = std::move(b);
    }
    return Json{{"config", config}, {"pass", pass()}, {"hard_disagreements", hard_disagreements()}, {"suites", ss}};
}

namespace {

std::string counts_cell(const Json& fn) {
    if (fn.contains("counts")) {
        const auto& c = fn["counts"];
        std::ostringstream os;
        for (const auto& [k, v] : c.items()) os << (os.tellp() > 0 ? " " : "") << k << "=" << v.dump();
        return os.str();
    }
    return "";
}

}  // namespace

std::string Report::summary_text() const {
    std::ostringstream os;
    for (const auto& s : suites) {
        os << to_string(s.suite) << ": " << (s.pass ? "PASS" : "FAIL") << " (hard disagreements " << s.hard_disagreements
           << ")\n";
        if (!s.body.contains("functions")) continue;
        for (const auto& fn : s.body["functions"]) {
            os << "  " << fn.value("function", std::string("?")) << "  " << (fn.value("pass", false) ? "pass" : "FAIL");
            const std::string counts = counts_cell(fn);
            if (!counts.empty()) os << "  " << counts;
            os << "\n";
        }
    }
    os << (pass() ? "ALL SUITES PASS" : "SOME SUITES FAIL") << "\n";
    return os.str();
}

std::string Report::summary_csv() const {
    std::ostringstream os;
    os << "suite,function,pass,counts\n";
    for (const auto& s : suites) {
        if (!s.body.contains("functions")) continue;
        for (const auto& fn : s.body["functions"])
            os << to_string(s.suite) << "," << fn.value("function", std::string("?")) << ","
               << (fn.value("pass", false) ? 1 : 0) << "," << counts_cell(fn) << "\n";
    }
    return os.str();
}

SuiteResult run_prop1(const RunConfig& config) { return prop1_from(cross_validate_all(config), config); }

SuiteResult run_thm2(const RunConfig& config) { return thm2_from(cross_validate_all(config), config); }

PolarSetup make_polar_setup(const FunctionOracle& f, const RunConfig& c) {
    const Region region = c.region_for(f);
    const bool one_d = f.dim == 1;
    const std::size_t point_res = one_d ? kPolarPoints1d : kPolarPointsNd;
    const std::size_t cov_res = one_d ? kPolarCovectors1d : kPolarCovectorsNd;
    const double cov_bound = one_d ? kPolarCovectorBound1d : kPolarCovectorBound2d;

    const std::vector<double> lo(f.dim, -cov_bound), hi(f.dim, cov_bound);
    const Region cov_box = Region::box(Vector(lo), Vector(hi));
    PolarSetup s{region, region.shrunk(-double(kPolarGrowCells), point_res), 0, GraphSample(f.dim), {GraphSample(f.dim), {}},
                 std::max(region.spacing(point_res), cov_box.spacing(cov_res)), kDefaultTol};
    s.probe_resolution = (point_res - 1 + 2 * kPolarGrowCells) * c.probe_refine + 1;
    const auto covs = sample_region(cov_box, cov_res);
    for (const Vector& x : sample_region(region, point_res))
        for (const Vector& xs : covs) s.candidates.add(x, xs);
    const GraphSource source = preferred_source(f);
    s.dense = sample_subdiff_graph(f, s.probe, s.probe_resolution, source, sampling_params(c));
    s.polar_tol = source == GraphSource::exact ? kExactPolarTol : c.tol;
    return s;
}

SuiteResult run_thm3(const RunConfig& config) {
    SuiteResult res{Suite::thm3, true, 0, Json::object(), {}};
    res.body["theorem"] = "polar_vs_iar_of_shifted_function";
    Json funcs = Json::array();
    for (const FunctionOracle* f : config.resolved_functions()) {
        const PolarSetup s = make_polar_setup(*f, config);
        const auto rows = polar_rows(*f, s, config);
        std::size_t agree = 0, ind = 0, dis = 0, related = 0;
        Json rows_dis = Json::array(), rows_ind = Json::array();
        for (const auto& r : rows) {
            if (r.polar.related) ++related;
            if (r.agreement == Agreement::agree) {
                ++agree;
            } else if (r.agreement == Agreement::indeterminate) {
                ++ind;
                rows_ind.push_back(polar_row_json(r));
            } else {
                ++dis;
                rows_dis.push_back(polar_row_json(r));
            }
        }
        const bool pass = dis == 0 && rows.size() >= kMinPolarCandidates;
        res.hard_disagreements += dis;
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", f->id},
                             {"region", s.region.describe()},
                             {"probe_region", s.probe.describe()},
                             {"probe_resolution", s.probe_resolution},
                             {"graph_source", to_string(s.dense.meta.source)},
                             {"graph_size", s.dense.graph.size()},
                             {"graph_truncated", s.dense.meta.truncated},
                             {"candidates", rows.size()},
                             {"related", related},
                             {"counts", counts_json(agree, ind, dis)},
                             {"pass", pass},
                             {"disagreements", rows_dis},
                             {"indeterminate", rows_ind}});
    }
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

SuiteResult run_cdd(const RunConfig& config) {
    SuiteResult res{Suite::cdd, true, 0, Json::object(), {}};
    res.body["theorem"] = "subderivative_vs_enlarged_subdifferential_support";
    Json funcs = Json::array();
    CddParams params;
    params.sampling = sampling_params(config);
    params.tol = config.cdd_tol;
    for (const FunctionOracle* f : config.resolved_functions()) {
        std::vector<Vector> xbars;
        for (const Vector& x : sample_region(config.region_for(*f), config.grid_for(*f)))
            if ((*f)(x).is_finite()) xbars.push_back(x);
        std::vector<Vector> dirs;
        for (std::size_t i = 0; i < f->dim; ++i) {
            dirs.push_back(Vector::unit(f->dim, i));
            dirs.push_back(-Vector::unit(f->dim, i));
        }
        std::vector<CddResult> results(xbars.size() * dirs.size());
        parallel_for(results.size(), [&](std::size_t k) {
            results[k] = cdd_inequality_check(*f, xbars[k / dirs.size()], dirs[k % dirs.size()], params);
        });
        std::size_t passed = 0, failed = 0, truncated = 0;
        Json failures = Json::array();
        for (std::size_t k = 0; k < results.size(); ++k) {
            const auto& r = results[k];
            if (r.truncated) ++truncated;
            if (r.verdict.holds) {
                ++passed;
                continue;
            }
            ++failed;
            failures.push_back(Json{{"xbar", json_vector(xbars[k / dirs.size()])},
                                    {"direction", json_vector(dirs[k % dirs.size()])},
                                    {"lhs", json_value(r.lhs.raw())},
                                    {"rhs", json_value(r.rhs.raw())},
                                    {"residual", json_value(r.verdict.residual)},
                                    {"note", r.verdict.note},
                                    {"witness", witness_json(r.verdict.witness)}});
        }
        const bool pass = failed == 0;
        res.hard_disagreements += failed;
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", f->id},
                             {"region", config.region_for(*f).describe()},
                             {"graph_source", to_string(params.source.value_or(preferred_source(*f)))},
                             {"cases", results.size()},
                             {"counts", Json{{"pass", passed}, {"fail", failed}}},
                             {"truncated_cases", truncated},
                             {"covector_bound", params.sampling.covector_bound},
                             {"pass", pass},
                             {"failures", failures}});
    }
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

SuiteResult run_predicates(const RunConfig& config) {
    SuiteResult res{Suite::predicates, true, 0, Json::object(), {}};
    res.body["theorem"] = "monotone_and_absorbing";
    Json funcs = Json::array();
    for (const FunctionOracle* f : config.resolved_functions()) {
        const Region region = config.region_for(*f);
        const GraphSource source = preferred_source(*f);
        const auto graph = sample_subdiff_graph(*f, region, config.grid_for(*f), source, sampling_params(config));
        const auto mono = is_monotone(graph.graph, source == GraphSource::exact ? kExactPolarTol : config.tol);
        // A lsc function is convex exactly when its subdifferential is monotone.
        const bool mono_expected = f->meta.is_convex;
        Json mono_json{{"graph_source", to_string(source)},
                       {"graph_size", graph.graph.size()},
                       {"monotone", mono.related},
                       {"expected", mono_expected},
                       {"min_product", json_value(mono.min_product)}};
        if (!mono.related && mono.witness && mono.other)
            mono_json["violating_pair"] = Json{{"point", json_vector(mono.witness->point)},
                                               {"covector", json_vector(mono.witness->covector)},
                                               {"other_point", json_vector(mono.other->point)},
                                               {"other_covector", json_vector(mono.other->covector)}};

        const PolarSetup s = make_polar_setup(*f, config);
        const double radius = 2.0 * s.candidate_spacing;
        const auto absorb = is_absorbing(s.dense.graph, s.candidates, radius, f->meta.is_convex ? f : nullptr, s.polar_tol);
        Json absorb_json{{"graph_source", to_string(s.dense.meta.source)},
                         {"graph_size", s.dense.graph.size()},
                         {"candidates", s.candidates.size()},
                         {"match_radius", radius},
                         {"absorbing", absorb.holds},
                         {"residual", json_value(absorb.residual)},
                         {"note", absorb.note}};
        if (!absorb.holds) absorb_json["witness"] = witness_json(absorb.witness);

        const bool pass = mono.related == mono_expected && absorb.holds;
        if (!pass) ++res.hard_disagreements;
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", f->id},
                             {"region", region.describe()},
                             {"monotone", mono_json},
                             {"absorbing", absorb_json},
                             {"pass", pass}});
    }
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

SuiteResult run_mvi(const RunConfig& config) {
    SuiteResult res{Suite::mvi, true, 0, Json::object(), {}};
    res.body["theorem"] = "mean_value_inequality";
    Json funcs = Json::array();
    std::size_t total_witnesses = 0;
    for (const FunctionOracle* f : config.resolved_functions()) {
        if (f->dim != 1) continue;
        std::vector<Vector> pts;
        for (const Vector& x : sample_region(config.region_for(*f), kMviGrid))
            if ((*f)(x).is_finite()) pts.push_back(x);
        struct Triple {
            Vector x, xbar;
            double lambda;
        };
        std::vector<Triple> triples;
        for (const Vector& x : pts)
            for (const Vector& xbar : pts) {
                if (x == xbar) continue;
                const double df = (*f)(xbar).raw() - (*f)(x).raw();
                triples.push_back({x, xbar, df});
                // df/2 qualifies (lambda <= df) only when df > 0
                if (df > 0.0) triples.push_back({x, xbar, df / 2});
            }
        std::vector<std::optional<MeanValuePoint>> found(triples.size());
        std::vector<std::string> errors(triples.size());
        parallel_for(triples.size(), [&](std::size_t i) {
            const Triple& t = triples[i];
            try {
                auto p = mean_value_witness(*f, t.x, t.xbar, t.lambda, config.scheme, config.t_resolution, config.tol);
                const ExtReal check = lower_dini(*f, p.point, t.xbar - t.x, config.scheme).value;
                if (p.parameter < 0.0 || p.parameter >= 1.0 || check < ExtReal(t.lambda - config.tol))
                    errors[i] = "witness does not verify";
                else
                    found[i] = std::move(p);
            } catch (const MeanValueError& e) {
                errors[i] = std::string(e.what()) + "; best candidate " + e.best_candidate.to_string() +
                            " with subderivative " + e.best_subderivative.to_string();
            }
        });
        std::size_t ok = 0;
        Json failures = Json::array();
        for (std::size_t i = 0; i < triples.size(); ++i) {
            if (found[i]) {
                ++ok;
                continue;
            }
            failures.push_back(Json{{"x", json_vector(triples[i].x)},
                                    {"xbar", json_vector(triples[i].xbar)},
                                    {"lambda", triples[i].lambda},
                                    {"error", errors[i]}});
        }
        total_witnesses += ok;
        const bool pass = failures.empty();
        res.hard_disagreements += failures.size();
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", f->id},
                             {"triples", triples.size()},
                             {"counts", Json{{"found", ok}, {"failed", failures.size()}}},
                             {"pass", pass},
                             {"failures", failures}});
    }
    const bool enough = total_witnesses >= kMinMviWitnesses;
    res.pass = res.pass && enough;
    res.body["witnesses"] = total_witnesses;
    res.body["minimum_witnesses"] = kMinMviWitnesses;
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

SuiteResult run_sanity(const RunConfig& config) {
    SuiteResult res{Suite::sanity, true, 0, Json::object(), {}};
    res.body["theorem"] = "subderivative_numerics";
    Json funcs = Json::array();
    std::size_t total_cases = 0;
    for (const FunctionOracle* f : config.resolved_functions()) {
        const bool one_d = f->dim == 1;
        std::vector<Vector> xbars;
        for (const Vector& x : sample_region(config.region_for(*f), one_d ? kSanityGrid1d : kSanityGridNd))
            if ((*f)(x).is_finite()) xbars.push_back(x);
        std::vector<Vector> dirs;
        if (one_d) {
            for (double s : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) dirs.push_back(Vector{s});
        } else {
            dirs = sphere_directions(f->dim, kSanityDirsNd);
        }
        struct Case {
            bool exact_ok = true, homogeneous = true, dominated = true;
            ExtReal dini, exact, clarke;
        };
        std::vector<Case> cases(xbars.size() * dirs.size());
        parallel_for(cases.size(), [&](std::size_t k) {
            const Vector& xbar = xbars[k / dirs.size()];
            const Vector& d = dirs[k % dirs.size()];
            Case& c = cases[k];
            c.dini = lower_dini(*f, xbar, d, config.scheme).value;
            if (f->exact_subderivative) {
                c.exact = (*f->exact_subderivative)(xbar, d);
                c.exact_ok = (c.dini.is_infinite() && c.exact.is_infinite()) ||
                             (c.dini.is_finite() && c.exact.is_finite() &&
                              std::abs(c.dini.raw() - c.exact.raw()) <= kSanityExactTol);
            }
            for (double tau : {0.5, 2.0}) {
                const ExtReal scaled = lower_dini(*f, xbar, tau * d, config.scheme).value;
                c.homogeneous = c.homogeneous && nearly_equal_rel(scaled, c.dini.scaled(tau), kHomogeneityRelTol);
            }
            c.clarke = clarke_directional(*f, xbar, d, config.scheme).value;
            c.dominated = c.clarke.is_infinite() || (c.dini.is_finite() && c.dini.raw() <= c.clarke.raw() + kDominanceTol);
        });
        std::size_t exact_fail = 0, homog_fail = 0, dom_fail = 0;
        Json failures = Json::array();
        for (std::size_t k = 0; k < cases.size(); ++k) {
            const Case& c = cases[k];
            exact_fail += !c.exact_ok;
            homog_fail += !c.homogeneous;
            dom_fail += !c.dominated;
            if (c.exact_ok && c.homogeneous && c.dominated) continue;
            failures.push_back(Json{{"xbar", json_vector(xbars[k / dirs.size()])},
                                    {"direction", json_vector(dirs[k % dirs.size()])},
                                    {"lower_dini", json_value(c.dini.raw())},
                                    {"exact", json_value(c.exact.raw())},
                                    {"clarke", json_value(c.clarke.raw())},
                                    {"exact_ok", c.exact_ok},
                                    {"homogeneous", c.homogeneous},
                                    {"dominated", c.dominated}});
        }
        total_cases += cases.size();
        const bool pass = failures.empty();
        res.hard_disagreements += failures.size();
        res.pass = res.pass && pass;
        funcs.push_back(Json{{"function", f->id},
                             {"cases", cases.size()},
                             {"counts", Json{{"exact_fail", exact_fail},
                                             {"homogeneity_fail", homog_fail},
                                             {"dominance_fail", dom_fail}}},
                             {"pass", pass},
                             {"failures", failures}});
    }
    const bool enough = total_cases >= kMinSanityCases;
    res.pass = res.pass && enough;
    res.body["cases"] = total_cases;
    res.body["minimum_cases"] = kMinSanityCases;
    res.body["tolerances"] = Json{{"exact", kSanityExactTol}, {"homogeneity_relative", kHomogeneityRelTol},
                                  {"dominance", kDominanceTol}};
    res.body["pass"] = res.pass;
    res.body["functions"] = funcs;
    return res;
}

Report run_suite(const RunConfig& config) {
    config.validate();
    Report rep;
    rep.config = config.to_json();
    rep.timing = Json::object();
    const Stopwatch total;
    const bool equivalence = config.suites.contains(Suite::prop1) || config.suites.contains(Suite::thm2);
    std::vector<EquivalenceReport> cv;
    if (equivalence) {
        const Stopwatch sw;
        cv = cross_validate_all(config);
        rep.timing["cross_validate"] = sw.seconds();
    }
    for (Suite s : config.suites) {
        const Stopwatch sw;
        switch (s) {
            case Suite::prop1: rep.suites.push_back(prop1_from(cv, config)); break;
            case Suite::thm2: rep.suites.push_back(thm2_from(cv, config)); break;
            case Suite::thm3: rep.suites.push_back(run_thm3(config)); break;
            case Suite::cdd: rep.suites.push_back(run_cdd(config)); break;
            case Suite::predicates: rep.suites.push_back(run_predicates(config)); break;
            case Suite::mvi: rep.suites.push_back(run_mvi(config)); break;
            case Suite::sanity: rep.suites.push_back(run_sanity(config)); break;
        }
        rep.timing[to_string(s)] = sw.seconds();
    }
    rep.timing["total"] = total.seconds();
    rep.timing["threads"] = worker_count();
    return rep;
}

void write_report(const Report& report, const RunConfig& config, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + (dir / name).string());
    };
    write("report.json", report.to_json().dump(2) + "\n");
    write("timing.json", report.timing.dump(2) + "\n");
    write("summary.csv", report.summary_csv());
    if (config.format == OutputFormat::csv)
        for (const auto& s : report.suites)
            for (const auto& [name, table] : s.tables) write(name, table);
}

Json explain(const ExplainQuery& q, const RunConfig& config) {
    const FunctionOracle& f = find_function(q.function);
    if (q.x.has_value() != q.xstar.has_value()) throw ConfigError("explain: --x and --xstar go together");
    if (!q.x && !q.xbar) throw ConfigError("explain: give --xbar, or --x with --xstar");
    for (const auto* v : {&q.x, &q.xstar, &q.xbar})
        if (*v && (*v)->dim() != f.dim)
            throw ConfigError("explain: point dimension " + std::to_string((*v)->dim()) + " does not match " + f.id);

    const Region region = config.region_for(f);
    const std::size_t grid = config.grid_for(f);
    Json out{{"function", f.id}, {"dimension", f.dim}, {"convex", f.meta.is_convex}, {"region", region.describe()}};

    auto subderivatives = [&](const Vector& at) {
        Json arr = Json::array();
        if (f(at).is_infinite()) return arr;
        for (const Vector& d : sphere_directions(f.dim, config.direction_resolution)) {
            Json row{{"direction", json_vector(d)},
                     {"lower_dini", json_value(lower_dini(f, at, d, config.scheme).value.raw())},
                     {"clarke", json_value(clarke_directional(f, at, d, config.scheme).value.raw())}};
            if (f.exact_subderivative) row["exact"] = json_value((*f.exact_subderivative)(at, d).raw());
            arr.push_back(std::move(row));
        }
        return arr;
    };

    if (q.xbar) {
        const Vector& xbar = *q.xbar;
        require_in_domain(f, xbar, "explain");
        if (!region.contains(xbar)) throw ConfigError("explain: xbar lies outside the region " + region.describe());
        const CrossValidationParams p = cv_params(f, config);
        const std::size_t fine = refined(grid, config.probe_refine);
        Json j{{"xbar", json_vector(xbar)}, {"subderivatives", subderivatives(xbar)}};
        const auto sd = minty_subderivative(f, xbar, region, fine, config.scheme, config.tol);
        const auto iar = iar_check(f, xbar, region, grid, config.t_resolution, config.tol);
        j["minty_subderivative"] = minty_json(sd);
        j["iar"] = minty_json(iar);
        j["subderivative_route"] = to_string(classify(sd.solution, sd.residual.raw(), iar.solution, iar.residual.raw(), p.band));
        const Region open = region.shrunk(1.0, grid);
        if (open.contains(xbar)) {
            const auto g = sample_subdiff_graph(f, region, fine, preferred_source(f), sampling_params(config));
            const auto sdf = minty_subdifferential(f, xbar, open, g.graph, config.tol);
            const auto iar_open = iar_check(f, xbar, open, grid - 2, config.t_resolution, config.tol);
            j["minty_subdifferential"] = minty_json(sdf);
            j["minty_subdifferential"]["graph_source"] = to_string(g.meta.source);
            j["minty_subdifferential"]["graph_truncated"] = g.meta.truncated;
            j["iar_open"] = minty_json(iar_open);
            j["subdifferential_route"] = to_string(
                classify(sdf.solution, sdf.residual.raw(), iar_open.solution, iar_open.residual.raw(), p.band));
        }
        out["minty"] = std::move(j);
    }

    if (q.x) {
        const Vector& x = *q.x;
        const Vector& xs = *q.xstar;
        Json j{{"x", json_vector(x)}, {"xstar", json_vector(xs)}};
        if (f(x).is_finite()) {
            j["subderivatives"] = subderivatives(x);
            Json mem = Json::object();
            if (f.exact_subdifferential) mem["exact"] = (*f.exact_subdifferential)(x).contains(xs, config.tol);
            const auto cx = convex_subdiff_contains(f, x, xs, region.shrunk(-2.0, grid), refined(grid, config.probe_refine),
                                                    config.tol);
            mem["convex"] = Json{{"contains", cx.contains}, {"residual", json_value(cx.residual)}};
            if (cx.witness) mem["convex"]["witness"] = json_vector(*cx.witness);
            const auto cl = clarke_subdiff_contains(f, x, xs, config.direction_resolution, config.scheme, {}, config.tol);
            mem["clarke"] = Json{{"contains", cl.contains}, {"residual", json_value(cl.residual)}};
            if (cl.witness) mem["clarke"]["worst_direction"] = json_vector(*cl.witness);
            j["membership"] = std::move(mem);
        } else {
            j["note"] = "x outside dom f; subdifferentials are empty";
        }
        const PolarSetup s = make_polar_setup(f, config);
        const auto pol = polar_contains(s.dense.graph, x, xs, s.polar_tol);
        Json pj{{"related", pol.related},
                {"min_product", json_value(pol.min_product)},
                {"graph_source", to_string(s.dense.meta.source)},
                {"graph_region", s.probe.describe()}};
        if (pol.witness)
            pj["witness"] = Json{{"point", json_vector(pol.witness->point)}, {"covector", json_vector(pol.witness->covector)}};
        j["polar"] = std::move(pj);
        const auto iar = polar_membership_via_iar(f, x, xs, s.probe, s.probe_resolution, config.t_resolution, config.tol);
        j["iar_shifted"] = Json{{"holds", iar.holds}, {"residual", json_value(iar.residual)}, {"witness", witness_json(iar.witness)}};
        out["polar"] = std::move(j);
    }
    return out;
}

namespace {

void render(std::ostringstream& os, const Json& j, int indent) {
    const std::string pad(std::size_t(indent) * 2, ' ');
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            os << pad << k << ":\n";
            render(os, v, indent + 1);
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << pad << k << ":\n";
            for (const auto& e : v) {
                os << pad << "  -\n";
                render(os, e, indent + 2);
            }
        } else {
            os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

}  // namespace

std::string explain_text(const Json& fragment) {
    std::ostringstream os;
    render(os, fragment, 0);
    return os.str();
}

SampledGraph dump_graph(const FunctionOracle& f, const RunConfig& config) {
    return sample_subdiff_graph(f, config.region_for(f), config.grid_for(f), preferred_source(f), sampling_params(config));
}

void write_polar_csv(std::ostream& os, const FunctionOracle& f, const RunConfig& config) {
    const PolarSetup s = make_polar_setup(f, config);
    const auto rows = polar_rows(f, s, config);
    os << csv_header("x_", f.dim) << "," << csv_header("xstar_", f.dim)
       << ",polar_related,min_product,iar_holds,iar_residual,agreement\n";
    for (const auto& r : rows)
        os << csv_coords(r.candidate.point) << "," << csv_coords(r.candidate.covector) << "," << (r.polar.related ? 1 : 0)
           << "," << csv_number(r.polar.min_product) << "," << (r.iar.holds ? 1 : 0) << "," << csv_number(r.iar.residual)
           << "," << to_string(r.agreement) << "\n";
}

}  // namespace varpolar
