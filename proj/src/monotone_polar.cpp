#include "varpolar/monotone_polar.hpp"

#include <limits>

#include "varpolar/rays.hpp"

namespace varpolar {

namespace {

double pair_product(const Vector& y, const Vector& ystar, const Vector& x, const Vector& xstar) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.dim(); ++i) s += (ystar[i] - xstar[i]) * (y[i] - x[i]);
    return s;
}

}  // namespace

PolarVerdict polar_contains(const GraphSample& T, const Vector& x, const Vector& xstar, double tol) {
    if (x.dim() != T.dim() || xstar.dim() != T.dim()) throw DimensionError("polar_contains: dimension mismatch");
    PolarVerdict out;
    for (const auto& p : T) {
        const double v = pair_product(p.point, p.covector, x, xstar);
        if (v < out.min_product) {
            out.min_product = v;
            out.witness = p;
        }
    }
    out.related = out.min_product >= -tol;
    return out;
}

PolarVerdict is_monotone(const GraphSample& T, double tol) {
    PolarVerdict out;
    const auto& pairs = T.pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            const double v = pair_product(pairs[j].point, pairs[j].covector, pairs[i].point, pairs[i].covector);
            if (v < out.min_product) {
                out.min_product = v;
                out.witness = pairs[i];
                out.other = pairs[j];
            }
        }
    }
    out.related = out.min_product >= -tol;
    return out;
}

GraphSample polar_of_sample(const GraphSample& T, const GraphSample& candidates, double tol) {
    if (T.dim() != candidates.dim()) throw DimensionError("polar_of_sample: dimension mismatch");
    GraphSample out(candidates.dim());
    for (const auto& c : candidates)
        if (polar_contains(T, c.point, c.covector, tol).related) out.add(c);
    return out;
}

Verdict is_absorbing(const GraphSample& T, const GraphSample& candidates, double match_radius,
                     const FunctionOracle* exact, double tol) {
    if (T.dim() != candidates.dim()) throw DimensionError("is_absorbing: dimension mismatch");
    if (!(match_radius > 0.0)) throw std::invalid_argument("is_absorbing: match_radius must be > 0");
    Verdict out{true, -std::numeric_limits<double>::infinity(), {}, {}};
    std::size_t related = 0;
    for (const auto& c : candidates) {
        if (!polar_contains(T, c.point, c.covector, tol).related) continue;
        ++related;
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& p : T) {
            nearest = std::min(nearest, graph_distance(p, c));
            if (nearest <= match_radius) break;
        }
        if (nearest <= match_radius) continue;
        if (exact && exact->exact_subdifferential && exact->dim == c.point.dim() &&
            (*exact->exact_subdifferential)(c.point).contains(c.covector, tol))
            continue;
        const double excess = nearest - match_radius;
        if (excess > out.residual) {
            out.residual = excess;
            out.witness.point = c.point;
            out.witness.covector = c.covector;
            out.witness.parameter = nearest;
        }
    }
    out.holds = !out.witness.point.has_value();
    if (out.holds) out.residual = related == 0 ? 0.0 : -match_radius;
    out.note = std::to_string(related) + " related candidates";
    return out;
}

Verdict polar_membership_via_iar(const FunctionOracle& f, const Vector& x, const Vector& xstar, const Region& probe,
                                 std::size_t probe_resolution, std::size_t ray_resolution, double tol) {
    if (x.dim() != f.dim || xstar.dim() != f.dim || probe.dim() != f.dim)
        throw DimensionError("polar_membership_via_iar: dimension mismatch");
    const auto scan = scan_rays([&](const Vector& y) { return eval_shifted(f, xstar, y); }, x,
                                sample_region(probe, probe_resolution), linspace(0.0, 1.0, ray_resolution));
    Verdict out;
    out.residual = scan.residual;
    out.holds = scan.residual <= tol;
    out.witness.point = scan.y;
    out.witness.parameter = scan.t;
    return out;
}

}  // namespace varpolar
