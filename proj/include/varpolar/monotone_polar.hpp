#ifndef VARPOLAR_MONOTONE_POLAR_HPP
#define VARPOLAR_MONOTONE_POLAR_HPP

#include <cstddef>
#include <optional>

#include "varpolar/graph.hpp"
#include "varpolar/oracle.hpp"
#include "varpolar/region.hpp"

namespace varpolar {

// Floating-point slack for "<y* - x*, y - x> >= 0" when every product is
// exactly representable (dyadic grids, exact covectors).
inline constexpr double kExactPolarTol = 1e-9;

struct PolarVerdict {
    bool related = true;
    double min_product = std::numeric_limits<double>::infinity();  // +inf for an empty graph
    std::optional<GraphPair> witness;
    std::optional<GraphPair> other;  // second element of a violating couple (is_monotone)
};

// (x, x*) against the monotone polar of T: min over T of <y* - x*, y - x>.
PolarVerdict polar_contains(const GraphSample& T, const Vector& x, const Vector& xstar, double tol = kDefaultTol);

// T subset of its own polar: every couple of elements is monotonically related.
PolarVerdict is_monotone(const GraphSample& T, double tol = kDefaultTol);

// Candidates monotonically related to every element of T.
GraphSample polar_of_sample(const GraphSample& T, const GraphSample& candidates, double tol = kDefaultTol);

// T^0 subset of T, tested on a finite candidate set: each related candidate
// must lie within match_radius (graph distance) of T, or belong to the exact
// subdifferential of `exact` when that oracle is given. The witness is the
// farthest offender; the residual is its distance minus match_radius.
Verdict is_absorbing(const GraphSample& T, const GraphSample& candidates, double match_radius,
                     const FunctionOracle* exact = nullptr, double tol = kDefaultTol);

// (f - x*)(y + t(x - y)) <= (f - x*)(y) + tol for every probe-grid y and every
// t of a uniform [0, 1] grid with ray_resolution points. The witness carries
// y and t of the largest increase.
Verdict polar_membership_via_iar(const FunctionOracle& f, const Vector& x, const Vector& xstar, const Region& probe,
                                 std::size_t probe_resolution, std::size_t ray_resolution = 64,
                                 double tol = kDefaultTol);

}  // namespace varpolar

#endif
