// Acceptance: one PASS/FAIL line per criterion, evaluated from the JSON report of
// `varpolar suite --suite all`. Tolerances below are pinned; the library's own
// pass flags are cross-checked against the raw counts rather than trusted.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "varpolar/library.hpp"

#ifndef VARPOLAR_CLI
#error "VARPOLAR_CLI must point at the varpolar executable"
#endif

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr double kProp1Seconds = 30.0;
constexpr double kMaxIndeterminate = 0.02;
constexpr std::size_t kGrid1d = 65;
constexpr std::size_t kGrid2d = 17 * 17;
constexpr std::size_t kMinCandidates = 200;
constexpr std::size_t kMinWitnesses = 100;
constexpr std::size_t kMinSanityCases = 500;
constexpr double kSanityExact = 1e-4;
constexpr double kSanityHomogeneity = 1e-8;
constexpr double kSanityDominance = 1e-6;
constexpr double kCddTol = 1e-3;

int failures = 0;

void line(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_all(const fs::path& out, const char* threads) {
    std::string cmd = threads ? std::string("VARPOLAR_THREADS=") + threads + " " : std::string();
    cmd += std::string("\"") + VARPOLAR_CLI + "\" suite --suite all --format json --out \"" + out.string() +
           "\" > \"" + (out.string() + ".stdout") + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const Json* find_suite(const Json& report, const char* name) {
    if (!report.contains("suites") || !report["suites"].contains(name)) return nullptr;
    return &report["suites"][name];
}

std::size_t count(const Json& fn, const char* key) { return fn["counts"].value(key, std::size_t{0}); }

std::size_t expected_grid(const std::string& id) {
    return varpolar::find_function(id).dim == 1 ? kGrid1d : kGrid2d;
}

void check_equivalence(const Json& report, const char* suite, const std::string& label, double seconds) {
    const Json* s = find_suite(report, suite);
    if (!s) return line(label, false, "suite missing from report");
    bool ok = true;
    std::size_t functions = 0, dis = 0, ind_worst_num = 0, ind_worst_den = 1;
    std::string worst = "-";
    for (const auto& fn : (*s)["functions"]) {
        ++functions;
        const std::string id = fn["function"];
        const std::size_t d = count(fn, "disagree"), i = count(fn, "indeterminate");
        const std::size_t denom = std::string(suite) == "prop1" ? fn["grid_points"].get<std::size_t>()
                                                               : fn["interior_points"].get<std::size_t>();
        dis += d;
        if (std::string(suite) == "prop1" && denom != expected_grid(id)) ok = false;
        if (std::string(suite) == "thm2") {
            const bool convex = varpolar::find_function(id).meta.is_convex;
            if (fn["graph_source"] != (convex ? "exact" : "clarke-numeric")) ok = false;
        }
        if (denom == 0 || double(i) > kMaxIndeterminate * double(denom)) ok = false;
        if (i * ind_worst_den > ind_worst_num * denom) {
            ind_worst_num = i;
            ind_worst_den = denom;
            worst = id;
        }
        if (!fn["pass"].get<bool>()) ok = false;
    }
    ok = ok && dis == 0 && functions == varpolar::test_library().size();
    std::ostringstream detail;
    detail << functions << " functions, " << dis << " hard disagreements, worst indeterminate " << ind_worst_num << "/"
           << ind_worst_den << " (" << worst << ")";
    if (seconds >= 0.0) {
        detail << ", runtime " << seconds << " s (limit " << kProp1Seconds << ")";
        ok = ok && seconds <= kProp1Seconds;
    }
    line(label, ok, detail.str());
}

void check_thm3(const Json& report) {
    const Json* s = find_suite(report, "thm3");
    if (!s) return line("thm3_polar_dual_route", false, "suite missing from report");
    bool ok = true;
    std::size_t functions = 0, dis = 0, min_cand = SIZE_MAX, ind = 0;
    for (const auto& fn : (*s)["functions"]) {
        ++functions;
        dis += count(fn, "disagree");
        ind += count(fn, "indeterminate");
        min_cand = std::min(min_cand, fn["candidates"].get<std::size_t>());
        if (!fn["pass"].get<bool>()) ok = false;
    }
    ok = ok && dis == 0 && min_cand >= kMinCandidates && functions == varpolar::test_library().size();
    line("thm3_polar_dual_route", ok,
         std::to_string(functions) + " functions, min candidates " + std::to_string(min_cand) + ", " +
             std::to_string(dis) + " hard disagreements, " + std::to_string(ind) + " inside band");
}

void check_cdd(const Json& report) {
    const Json* s = find_suite(report, "cdd");
    if (!s) return line("cdd_formula", false, "suite missing from report");
    bool ok = true;
    std::size_t cases = 0, failed = 0, truncated = 0;
    for (const auto& fn : (*s)["functions"]) {
        cases += fn["cases"].get<std::size_t>();
        failed += count(fn, "fail");
        truncated += fn["truncated_cases"].get<std::size_t>();
        if (!fn["pass"].get<bool>()) ok = false;
    }
    const double tol = report["config"]["tolerances"].value("cdd", -1.0);
    ok = ok && failed == 0 && cases > 0 && tol == kCddTol;
    line("cdd_formula", ok,
         std::to_string(cases) + " cases, " + std::to_string(failed) + " failures, " + std::to_string(truncated) +
             " under covector truncation");
}

void check_predicates(const Json& report) {
    const Json* s = find_suite(report, "predicates");
    if (!s) return line("predicates", false, "suite missing from report");
    bool ok = true;
    std::size_t convex_monotone = 0, absorbing = 0, functions = 0;
    bool neg_abs_pair = false;
    for (const auto& fn : (*s)["functions"]) {
        ++functions;
        const std::string id = fn["function"];
        const auto& mono = fn["monotone"];
        if (varpolar::find_function(id).meta.is_convex) {
            if (mono["graph_source"] == "exact" && mono["monotone"] == true) ++convex_monotone;
            else ok = false;
        }
        if (id == "neg_abs")
            neg_abs_pair = mono["graph_source"] == "clarke-numeric" && mono["monotone"] == false &&
                           mono.contains("violating_pair");
        if (fn["absorbing"]["absorbing"] == true) ++absorbing;
        else ok = false;
    }
    ok = ok && neg_abs_pair && functions == varpolar::test_library().size();
    line("predicates", ok,
         std::to_string(convex_monotone) + " convex graphs monotone, neg_abs violating pair " +
             (neg_abs_pair ? "found" : "missing") + ", " + std::to_string(absorbing) + "/" +
             std::to_string(functions) + " absorbing at 2x spacing");
}

void check_mvi(const Json& report) {
    const Json* s = find_suite(report, "mvi");
    if (!s) return line("mean_value_inequality", false, "suite missing from report");
    std::size_t found = 0, failed = 0;
    for (const auto& fn : (*s)["functions"]) {
        found += count(fn, "found");
        failed += count(fn, "failed");
    }
    line("mean_value_inequality", found >= kMinWitnesses && failed == 0 && (*s)["pass"] == true,
         std::to_string(found) + " witnesses, " + std::to_string(failed) + " failures");
}

void check_sanity(const Json& report) {
    const Json* s = find_suite(report, "sanity");
    if (!s) return line("numerical_sanity", false, "suite missing from report");
    std::size_t cases = 0, ex = 0, ho = 0, dom = 0;
    for (const auto& fn : (*s)["functions"]) {
        cases += fn["cases"].get<std::size_t>();
        ex += count(fn, "exact_fail");
        ho += count(fn, "homogeneity_fail");
        dom += count(fn, "dominance_fail");
    }
    const auto& tol = (*s)["tolerances"];
    const bool pinned = tol["exact"] == kSanityExact && tol["homogeneity_relative"] == kSanityHomogeneity &&
                        tol["dominance"] == kSanityDominance;
    line("numerical_sanity", cases >= kMinSanityCases && ex + ho + dom == 0 && pinned,
         std::to_string(cases) + " cases, exact/homogeneity/dominance failures " + std::to_string(ex) + "/" +
             std::to_string(ho) + "/" + std::to_string(dom));
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / "varpolar_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    const int status_a = run_all(root / "a", nullptr);
    const int status_b = run_all(root / "b", "1");
    const std::string text_a = slurp(root / "a" / "report.json");
    const std::string text_b = slurp(root / "b" / "report.json");
    if (text_a.empty()) {
        std::cout << "FAIL report: no report.json (exit " << status_a << ")\n" << slurp(root / "a.stdout");
        return 1;
    }
    const Json report = Json::parse(text_a);
    const Json timing = Json::parse(slurp(root / "a" / "timing.json"));
    const double prop1_seconds = timing.value("cross_validate", 0.0) + timing.value("prop1", 0.0);

    check_equivalence(report, "prop1", "prop1_equivalence", prop1_seconds);
    check_equivalence(report, "thm2", "thm2_equivalence", -1.0);
    check_thm3(report);
    check_cdd(report);
    check_predicates(report);
    check_mvi(report);
    check_sanity(report);
    line("determinism", !text_b.empty() && text_a == text_b && status_a == status_b,
         "report.json " + std::to_string(text_a.size()) + " bytes, " + (text_a == text_b ? "identical" : "differs") +
             " across default and single-threaded runs");

    const bool cli_consistent = (status_a == 0) == (failures == 0);
    if (!cli_consistent) line("cli_exit_status", false, "exit " + std::to_string(status_a) + " disagrees with criteria");
    std::cout << (failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " (total time " << timing.value("total", 0.0)
              << " s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
