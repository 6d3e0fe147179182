#ifndef VARPOLAR_SUBDIFFERENTIAL_HPP
#define VARPOLAR_SUBDIFFERENTIAL_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "varpolar/graph.hpp"
#include "varpolar/oracle.hpp"
#include "varpolar/region.hpp"
#include "varpolar/subderivative.hpp"

namespace varpolar {

struct MembershipVerdict {
    bool contains = true;
    double residual = 0.0;  // worst margin; <= tol exactly when contains
    std::optional<Vector> witness;
};

// x* in the convex-analysis subdifferential at xbar, tested against every
// grid point y of the probe region: <x*, y - xbar> + f(xbar) <= f(y) + tol.
// xbar itself contributes a zero margin, so the residual is never negative.
MembershipVerdict convex_subdiff_contains(const FunctionOracle& f, const Vector& xbar, const Vector& xstar,
                                          const Region& probe, std::size_t resolution, double tol = kDefaultTol);

struct ClarkeSupport {
    Vector direction;
    ExtReal value;  // f^(x; direction)
};

// f^(x; d) for every d in `dirs`.
std::vector<ClarkeSupport> clarke_support(const FunctionOracle& f, const Vector& x, const std::vector<Vector>& dirs,
                                          const LiminfScheme& scheme = {}, const ClarkeParams& clarke = {});

// Residual of <x*, d> <= f^(x; d) over a precomputed support table.
MembershipVerdict clarke_membership(const std::vector<ClarkeSupport>& support, const Vector& xstar,
                                    double tol = kDefaultTol);

// x* in the Clarke subdifferential at xbar: <x*, d> <= f^(xbar; d) + tol for
// all unit d of sphere_directions(n, dir_resolution). The witness is the
// worst direction.
MembershipVerdict clarke_subdiff_contains(const FunctionOracle& f, const Vector& xbar, const Vector& xstar,
                                          std::size_t dir_resolution = 16, const LiminfScheme& scheme = {},
                                          const ClarkeParams& clarke = {}, double tol = kDefaultTol);

enum class GraphSource { exact, clarke_numeric };

const char* to_string(GraphSource s) noexcept;
GraphSource parse_graph_source(const std::string& s);

struct GraphSamplingParams {
    double covector_bound = kDefaultTruncationBound;  // covectors live in [-B, B]^n
    std::size_t covector_resolution = 81;             // candidate grid per axis, 1-D
    std::size_t covector_resolution_nd = 21;          // candidate grid per axis, n >= 2
    std::size_t dir_resolution = 16;
    std::size_t ball_points = 16;
    LiminfScheme scheme{};
    ClarkeParams clarke{};
    double tol = kDefaultTol;
    std::size_t max_dim = kDefaultMaxGridDim;
};

struct GraphMeta {
    std::string function_id;
    std::string region;
    std::size_t resolution = 0;
    GraphSource source = GraphSource::exact;
    double covector_bound = kDefaultTruncationBound;
    bool truncated = false;
    std::vector<Vector> truncated_points;  // base points whose covector set was clipped
};

struct SampledGraph {
    GraphSample graph;
    GraphMeta meta;
};

// Samples the graph of a subdifferential lying between the convex-analysis
// and Clarke subdifferentials. Exact mode uses the oracle's representatives
// (interval low/mid/high, segment vertices, ball boundary points); numeric
// mode keeps the covector-grid candidates accepted by the Clarke test.
// Throws std::invalid_argument in exact mode when the exact oracle is absent.
SampledGraph sample_subdiff_graph(const FunctionOracle& f, const Region& region, std::size_t resolution,
                                  GraphSource source, const GraphSamplingParams& params = {});

// Same, over an explicit list of base points.
SampledGraph sample_subdiff_graph_at(const FunctionOracle& f, const std::vector<Vector>& points, GraphSource source,
                                     const GraphSamplingParams& params = {});

// Exact when the oracle provides a subdifferential, Clarke-numeric otherwise.
GraphSource preferred_source(const FunctionOracle& f) noexcept;

// Sidecar metadata record for a graph CSV, as JSON.
void write_graph_meta(std::ostream& os, const GraphMeta& meta);

struct EnlargementParams {
    double epsilon = 1.0;
};

// Pairs (x, x*) of g with |x - xbar| <= eps, |f(x) - f(xbar)| <= eps and
// <x*, x - xbar> <= eps.
GraphSample epsilon_enlargement(const GraphSample& g, const FunctionOracle& f, const Vector& xbar,
                                const EnlargementParams& p);

struct CddParams {
    std::vector<double> eps_list;  // strictly decreasing; default 1, 1/2, ..., 2^-10
    std::size_t resolution = 9;    // per-axis grid on xbar + eps * [-1, 1]^n
    std::optional<GraphSource> source;  // defaults to preferred_source(f)
    GraphSamplingParams sampling{};
    double tol = kDefaultTol;

    CddParams();
};

struct CddResult {
    Verdict verdict;
    ExtReal lhs;             // f'(xbar; d)
    ExtReal rhs;             // min over eps of sup <enlargement, d>
    double rhs_grid = 0.0;   // the same before reading truncated maxima as +inf
    bool truncated = false;
    std::vector<std::size_t> enlargement_sizes;
};

// Checks f'(xbar; d) <= inf_eps sup <enlargement_eps, d> + tol together with
// nonemptiness of every sampled enlargement. A supremum attained by a
// covector clipped to the truncation box counts as +inf and sets `truncated`.
CddResult cdd_inequality_check(const FunctionOracle& f, const Vector& xbar, const Vector& d,
                               const CddParams& params = {});

}  // namespace varpolar

#endif
