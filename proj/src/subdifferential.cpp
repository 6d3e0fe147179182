#include "varpolar/subdifferential.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace varpolar {

namespace {

bool on_truncation_face(const Vector& v, double bound) {
    for (double c : v.coords())
        if (std::abs(c) >= bound) return true;
    return false;
}

std::vector<Vector> covector_grid(std::size_t dim, double bound, std::size_t resolution, std::size_t max_dim) {
    std::vector<double> lo(dim, -bound), hi(dim, bound);
    return sample_region(Region::box(Vector(lo), Vector(hi)), resolution, max_dim);
}

}  // namespace

MembershipVerdict convex_subdiff_contains(const FunctionOracle& f, const Vector& xbar, const Vector& xstar,
                                          const Region& probe, std::size_t resolution, double tol) {
    if (xbar.dim() != f.dim || xstar.dim() != f.dim || probe.dim() != f.dim)
        throw DimensionError("convex_subdiff_contains: dimension mismatch");
    const double fx = require_in_domain(f, xbar, "convex_subdiff_contains");
    MembershipVerdict out{true, 0.0, xbar};
    for (const Vector& y : sample_region(probe, resolution)) {
        const ExtReal fy = f(y);
        if (fy.is_infinite()) continue;
        const double margin = xstar.dot(y - xbar) + fx - fy.raw();
        if (margin > out.residual) {
            out.residual = margin;
            out.witness = y;
        }
    }
    out.contains = out.residual <= tol;
    return out;
}

std::vector<ClarkeSupport> clarke_support(const FunctionOracle& f, const Vector& x, const std::vector<Vector>& dirs,
                                          const LiminfScheme& scheme, const ClarkeParams& clarke) {
    std::vector<ClarkeSupport> out;
    out.reserve(dirs.size());
    for (const Vector& d : dirs) out.push_back({d, clarke_directional(f, x, d, scheme, clarke).value});
    return out;
}

MembershipVerdict clarke_membership(const std::vector<ClarkeSupport>& support, const Vector& xstar, double tol) {
    MembershipVerdict out{true, -std::numeric_limits<double>::infinity(), std::nullopt};
    for (const auto& s : support) {
        if (s.value.is_infinite()) continue;
        const double margin = xstar.dot(s.direction) - s.value.raw();
        if (margin > out.residual) {
            out.residual = margin;
            out.witness = s.direction;
        }
    }
    out.contains = out.residual <= tol;
    return out;
}

MembershipVerdict clarke_subdiff_contains(const FunctionOracle& f, const Vector& xbar, const Vector& xstar,
                                          std::size_t dir_resolution, const LiminfScheme& scheme,
                                          const ClarkeParams& clarke, double tol) {
    if (xbar.dim() != f.dim || xstar.dim() != f.dim) throw DimensionError("clarke_subdiff_contains: dimension mismatch");
    require_in_domain(f, xbar, "clarke_subdiff_contains");
    const auto support = clarke_support(f, xbar, sphere_directions(f.dim, dir_resolution), scheme, clarke);
    return clarke_membership(support, xstar, tol);
}

const char* to_string(GraphSource s) noexcept { return s == GraphSource::exact ? "exact" : "clarke-numeric"; }

GraphSource parse_graph_source(const std::string& s) {
    if (s == "exact") return GraphSource::exact;
    if (s == "clarke-numeric" || s == "clarke") return GraphSource::clarke_numeric;
    throw std::invalid_argument("unknown graph source '" + s + "' (expected exact or clarke-numeric)");
}

GraphSource preferred_source(const FunctionOracle& f) noexcept {
    return f.exact_subdifferential ? GraphSource::exact : GraphSource::clarke_numeric;
}

SampledGraph sample_subdiff_graph_at(const FunctionOracle& f, const std::vector<Vector>& points, GraphSource source,
                                     const GraphSamplingParams& params) {
    if (source == GraphSource::exact && !f.exact_subdifferential)
        throw std::invalid_argument("sample_subdiff_graph: '" + f.id + "' has no exact subdifferential oracle");
    const std::size_t n = f.dim;
    const double bound = params.covector_bound;
    SampledGraph out{GraphSample(n), {}};
    out.meta.function_id = f.id;
    out.meta.source = source;
    out.meta.covector_bound = bound;

    std::vector<Vector> candidates;
    std::vector<Vector> dirs;
    if (source == GraphSource::clarke_numeric) {
        candidates = covector_grid(n, bound, n == 1 ? params.covector_resolution : params.covector_resolution_nd,
                                   params.max_dim);
        dirs = sphere_directions(n, params.dir_resolution);
        for (std::size_t i = 0; i < n; ++i) {
            for (double s : {1.0, -1.0}) {
                Vector e = s * Vector::unit(n, i);
                if (std::find(dirs.begin(), dirs.end(), e) == dirs.end()) dirs.push_back(e);
            }
        }
    }

    for (const Vector& x : points) {
        if (x.dim() != n) throw DimensionError("sample_subdiff_graph: point dimension mismatch");
        if (f(x).is_infinite()) continue;
        bool clipped = false;
        if (source == GraphSource::exact) {
            const auto reps = (*f.exact_subdifferential)(x).representatives(bound, params.ball_points);
            clipped = reps.truncated;
            for (const Vector& c : reps.covectors) out.graph.add(x, c);
        } else {
            const auto support = clarke_support(f, x, dirs, params.scheme, params.clarke);
            auto value_along = [&](const Vector& e) {
                for (const auto& s : support)
                    if (s.direction == e) return s.value;
                return ExtReal::infinity();
            };
            std::vector<Vector> local = candidates;
            for (const auto& s : support) clipped = clipped || s.value.is_infinite();
            // Per-axis support interval [-f^(x; -e_i), f^(x; e_i)]; its ends
            // (1-D) or its center (n-D) join the candidate grid.
            std::vector<double> lo(n), hi(n);
            bool finite = true;
            for (std::size_t i = 0; i < n; ++i) {
                const ExtReal up = value_along(Vector::unit(n, i));
                const ExtReal down = value_along(-Vector::unit(n, i));
                finite = finite && up.is_finite() && down.is_finite();
                hi[i] = up.is_finite() ? std::min(up.raw(), bound) : bound;
                lo[i] = down.is_finite() ? std::max(-down.raw(), -bound) : -bound;
            }
            if (n == 1) {
                local.push_back(Vector{lo[0]});
                local.push_back(Vector{hi[0]});
                local.push_back(Vector{0.5 * (lo[0] + hi[0])});
            } else if (finite) {
                std::vector<double> mid(n);
                for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
                local.push_back(Vector(mid));
            }
            std::sort(local.begin(), local.end());
            local.erase(std::unique(local.begin(), local.end()), local.end());
            for (const Vector& c : local) {
                if (clarke_membership(support, c, params.tol).contains) out.graph.add(x, c);
            }
        }
        if (clipped) {
            out.meta.truncated = true;
            out.meta.truncated_points.push_back(x);
        }
    }
    return out;
}

SampledGraph sample_subdiff_graph(const FunctionOracle& f, const Region& region, std::size_t resolution,
                                  GraphSource source, const GraphSamplingParams& params) {
    if (region.dim() != f.dim) throw DimensionError("sample_subdiff_graph: region dimension mismatch");
    auto out = sample_subdiff_graph_at(f, sample_region(region, resolution, params.max_dim), source, params);
    out.meta.region = region.describe();
    out.meta.resolution = resolution;
    return out;
}

void write_graph_meta(std::ostream& os, const GraphMeta& meta) {
    nlohmann::ordered_json j;
    j["function"] = meta.function_id;
    j["region"] = meta.region;
    j["resolution"] = meta.resolution;
    j["source"] = to_string(meta.source);
    j["covector_bound"] = meta.covector_bound;
    j["truncated"] = meta.truncated;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : meta.truncated_points)
        pts.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    j["truncated_points"] = pts;
    os << j.dump(2) << '\n';
}

GraphSample epsilon_enlargement(const GraphSample& g, const FunctionOracle& f, const Vector& xbar,
                                const EnlargementParams& p) {
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon_enlargement: epsilon must be > 0");
    if (g.dim() != f.dim || xbar.dim() != f.dim) throw DimensionError("epsilon_enlargement: dimension mismatch");
    const double fx = require_in_domain(f, xbar, "epsilon_enlargement");
    const double eps = p.epsilon;
    GraphSample out(g.dim());
    for (const auto& pr : g) {
        const Vector dx = pr.point - xbar;
        if (dx.norm() > eps) continue;
        const ExtReal fv = f(pr.point);
        if (fv.is_infinite() || std::abs(fv.raw() - fx) > eps) continue;
        if (pr.covector.dot(dx) > eps) continue;
        out.add(pr);
    }
    return out;
}

CddParams::CddParams() {
    for (int k = 0; k <= 10; ++k) eps_list.push_back(std::ldexp(1.0, -k));
}

CddResult cdd_inequality_check(const FunctionOracle& f, const Vector& xbar, const Vector& d, const CddParams& params) {
    if (xbar.dim() != f.dim || d.dim() != f.dim) throw DimensionError("cdd_inequality_check: dimension mismatch");
    require_in_domain(f, xbar, "cdd_inequality_check");
    if (params.eps_list.empty()) throw std::invalid_argument("cdd_inequality_check: empty epsilon list");
    const GraphSource source = params.source.value_or(preferred_source(f));
    const double bound = params.sampling.covector_bound;
    const std::size_t n = f.dim;

    CddResult out;
    out.lhs = lower_dini(f, xbar, d, params.sampling.scheme).value;
    out.rhs = ExtReal::infinity();
    out.rhs_grid = std::numeric_limits<double>::infinity();

    for (double eps : params.eps_list) {
        std::vector<double> lo(n), hi(n);
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = xbar[i] - eps;
            hi[i] = xbar[i] + eps;
        }
        const auto sampled =
            sample_subdiff_graph(f, Region::box(Vector(lo), Vector(hi)), params.resolution, source, params.sampling);
        const GraphSample enl = epsilon_enlargement(sampled.graph, f, xbar, {eps});
        out.enlargement_sizes.push_back(enl.size());
        if (enl.empty()) {
            out.verdict.holds = false;
            out.verdict.residual = std::numeric_limits<double>::infinity();
            out.verdict.witness.parameter = eps;
            out.verdict.note = "empty enlargement sample (under-sampled)";
            return out;
        }
        double sup = -std::numeric_limits<double>::infinity();
        const GraphPair* arg = nullptr;
        for (const auto& pr : enl) {
            const double v = pr.covector.dot(d);
            if (v > sup) {
                sup = v;
                arg = &pr;
            }
        }
        const bool unbounded = sampled.meta.truncated && on_truncation_face(arg->covector, bound);
        out.truncated = out.truncated || unbounded;
        const ExtReal level = unbounded ? ExtReal::infinity() : ExtReal(sup);
        if (sup < out.rhs_grid) out.rhs_grid = sup;
        if (level < out.rhs) {
            out.rhs = level;
            out.verdict.witness.point = arg->point;
            out.verdict.witness.covector = arg->covector;
            out.verdict.witness.parameter = eps;
        }
    }
    if (out.lhs.is_infinite())
        out.verdict.residual = out.rhs.is_infinite() ? 0.0 : std::numeric_limits<double>::infinity();
    else
        out.verdict.residual = out.rhs.is_infinite() ? -std::numeric_limits<double>::infinity()
                                                     : out.lhs.raw() - out.rhs.raw();
    out.verdict.holds = out.verdict.residual <= params.tol;
    if (out.truncated) out.verdict.note = "covector truncation at bound " + std::to_string(bound);
    return out;
}

}  // namespace varpolar
