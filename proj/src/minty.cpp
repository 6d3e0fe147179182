#include "varpolar/minty.hpp"

#include <algorithm>
#include <limits>

#include "varpolar/parallel.hpp"
#include "varpolar/rays.hpp"

namespace varpolar {

namespace {

void require_member(const Region& C, const Vector& xbar, const char* context) {
    if (xbar.dim() != C.dim()) throw DimensionError(std::string(context) + ": dimension mismatch");
    if (!C.contains(xbar)) throw DomainError(std::string(context) + ": xbar " + xbar.to_string() + " is not in C");
}

}  // namespace

MintyReport iar_check(const FunctionOracle& f, const Vector& xbar, const Region& C, std::size_t resolution,
                      std::size_t t_resolution, double tol) {
    require_member(C, xbar, "iar_check");
    const auto scan = scan_rays([&](const Vector& y) { return f(y); }, xbar, sample_region(C, resolution),
                                linspace(0.0, 1.0, t_resolution));
    MintyReport out;
    out.residual = scan.residual;
    out.solution = scan.residual <= tol;
    out.witness.point = scan.y;
    out.witness.parameter = scan.t;
    out.probe = {C.describe(), resolution, t_resolution};
    return out;
}

MintyReport minty_subderivative(const FunctionOracle& f, const Vector& xbar, const Region& C, std::size_t resolution,
                                const LiminfScheme& scheme, double tol) {
    require_member(C, xbar, "minty_subderivative");
    MintyReport out;
    out.residual = ExtReal(0.0);
    out.probe = {C.describe(), resolution, 0};
    for (const Vector& y : sample_region(C, resolution)) {
        if (y == xbar || f(y).is_infinite()) continue;
        const ExtReal v = lower_dini(f, y, xbar - y, scheme).value;
        if (out.residual < v) {
            out.residual = v;
            out.witness.point = y;
            if (v.is_infinite()) break;
        }
    }
    out.solution = out.residual <= ExtReal(tol);
    return out;
}

MintyReport minty_subdifferential(const FunctionOracle& f, const Vector& xbar, const Region& U,
                                  const GraphSample& graph, double tol) {
    require_member(U, xbar, "minty_subdifferential");
    if (graph.dim() != f.dim) throw DimensionError("minty_subdifferential: graph dimension mismatch");
    MintyReport out;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (const auto& p : graph) {
        if (!U.contains(p.point)) continue;
        ++used;
        const double v = p.covector.dot(xbar - p.point);
        if (v > best) {
            best = v;
            out.witness.point = p.point;
            out.witness.covector = p.covector;
        }
    }
    if (used == 0) throw SampleError("minty_subdifferential: graph has no points inside U = " + U.describe());
    out.residual = ExtReal(best);
    out.solution = best <= tol;
    out.probe = {U.describe(), used, 0};
    return out;
}

const char* to_string(Agreement a) noexcept {
    switch (a) {
        case Agreement::agree: return "agree";
        case Agreement::indeterminate: return "indeterminate";
        case Agreement::disagree: return "disagree";
    }
    return "?";
}

Agreement classify(bool a_holds, double a_residual, bool b_holds, double b_residual, double band) {
    if (a_holds == b_holds) return Agreement::agree;
    const double failing = a_holds ? b_residual : a_residual;
    return std::abs(failing) <= band ? Agreement::indeterminate : Agreement::disagree;
}

std::size_t refined(std::size_t resolution, std::size_t refine) { return (resolution - 1) * refine + 1; }

std::size_t EquivalenceReport::count_prop1(Agreement a) const {
    return std::count_if(rows.begin(), rows.end(), [&](const EquivalenceRow& r) { return r.prop1 == a; });
}

std::size_t EquivalenceReport::count_thm2(Agreement a) const {
    return std::count_if(rows.begin(), rows.end(), [&](const EquivalenceRow& r) { return r.thm2 == a; });
}

std::size_t EquivalenceReport::thm2_rows() const {
    return std::count_if(rows.begin(), rows.end(), [](const EquivalenceRow& r) { return r.thm2.has_value(); });
}

EquivalenceReport cross_validate(const FunctionOracle& f, const Region& region, const CrossValidationParams& params) {
    if (region.dim() != f.dim) throw DimensionError("cross_validate: region dimension mismatch");
    if (params.probe_refine == 0) throw std::invalid_argument("cross_validate: probe_refine must be positive");
    const Region open = region.shrunk(1.0, params.resolution);
    const std::size_t fine = refined(params.resolution, params.probe_refine);
    const GraphSource source = params.source.value_or(preferred_source(f));

    EquivalenceReport rep;
    rep.function_id = f.id;
    rep.region = region.describe();
    rep.open_region = open.describe();
    rep.params = params;

    const auto graph = sample_subdiff_graph(f, region, fine, source, params.sampling);
    rep.graph_truncated = graph.meta.truncated;

    std::vector<Vector> xbars;
    for (const Vector& x : sample_region(region, params.resolution))
        if (f(x).is_finite()) xbars.push_back(x);

    std::vector<std::optional<EquivalenceRow>> rows(xbars.size());
    parallel_for(xbars.size(), [&](std::size_t i) {
        const Vector& xbar = xbars[i];
        EquivalenceRow row{xbar, open.contains(xbar),
                           minty_subderivative(f, xbar, region, fine, params.scheme, params.tol),
                           iar_check(f, xbar, region, params.resolution, params.t_resolution, params.tol),
                           Agreement::agree, {}, {}, {}};
        row.prop1 = classify(row.subderivative.solution, row.subderivative.residual.raw(), row.iar_closed.solution,
                             row.iar_closed.residual.raw(), params.band);
        if (row.interior) {
            row.subdifferential = minty_subdifferential(f, xbar, open, graph.graph, params.tol);
            row.iar_open = iar_check(f, xbar, open, params.resolution - 2, params.t_resolution, params.tol);
            row.thm2 = classify(row.subdifferential->solution, row.subdifferential->residual.raw(),
                                row.iar_open->solution, row.iar_open->residual.raw(), params.band);
        }
        rows[i] = std::move(row);
    });
    for (auto& r : rows) rep.rows.push_back(std::move(*r));
    return rep;
}

}  // namespace varpolar
