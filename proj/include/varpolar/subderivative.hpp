#ifndef VARPOLAR_SUBDERIVATIVE_HPP
#define VARPOLAR_SUBDERIVATIVE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "varpolar/extreal.hpp"
#include "varpolar/graph.hpp"
#include "varpolar/oracle.hpp"

namespace varpolar {

// Geometric step grid t_k = t0 * ratio^k, k = 0..steps-1. The liminf as
// t -> 0 is estimated from the smallest `tail_fraction` of the grid.
struct LiminfScheme {
    double t0 = 1e-1;
    double ratio = 0.5;
    std::size_t steps = 24;
    double tail_fraction = 0.25;

    // Throws std::invalid_argument on a malformed scheme, including one whose
    // smallest step falls below 1e-12.
    void validate() const;
    [[nodiscard]] std::size_t tail_size() const;
    // The tail window, largest step first.
    [[nodiscard]] std::vector<double> tail_steps() const;

    friend bool operator==(const LiminfScheme&, const LiminfScheme&) = default;
};

struct SubderivEstimate {
    ExtReal value;
    ExtReal low;   // smallest quotient seen in the tail window
    ExtReal high;  // largest
    LiminfScheme scheme_used;
};

// Lower Dini subderivative f'(xbar; d): the minimum of the difference
// quotients over the tail window. Steps are taken along d/|d| and rescaled
// by |d|, so the sampled points do not depend on the length of d.
// Throws DomainError when f(xbar) = +inf.
SubderivEstimate lower_dini(const FunctionOracle& f, const Vector& xbar, const Vector& d,
                            const LiminfScheme& scheme = {});

struct ClarkeParams {
    std::vector<double> deltas{1e-2, 1e-4, 1e-6, 1e-8};  // strictly decreasing
    std::size_t nbhd_resolution = 9;  // per-axis grid of the unit ball of base points
    double radius_factor = 8.0;       // base points within radius_factor * t of xbar

    void validate() const;
};

// Clarke directional derivative f^(xbar; d). For every delta and every tail
// step t, base points x range over a ball of radius r = radius_factor * t
// around xbar restricted to |f(x) - f(xbar)| <= r; the inner infimum runs
// over d and d +- delta * e_i. value = max over delta, steps and base points.
// `low` is the smallest per-step value for the maximizing delta.
SubderivEstimate clarke_directional(const FunctionOracle& f, const Vector& xbar, const Vector& d,
                                    const LiminfScheme& scheme = {}, const ClarkeParams& params = {});

// Thrown when no mean value point is found. Carries the best candidate.
class MeanValueError : public std::runtime_error {
public:
    MeanValueError(const std::string& what, Vector best, ExtReal best_value)
        : std::runtime_error(what), best_candidate(std::move(best)), best_subderivative(best_value) {}

    Vector best_candidate;
    ExtReal best_subderivative;
};

struct MeanValuePoint {
    Vector point;
    double parameter;  // point = x + parameter * (xbar - x), parameter in [0, 1)
    ExtReal subderivative;
};

// Finds x0 in [x, xbar[ with f'(x0; xbar - x) >= lambda - tol, scanning the
// ray grid from x and refining once around the best candidate.
// Requires f(x) finite, x != xbar and lambda <= f(xbar) - f(x).
MeanValuePoint mean_value_witness(const FunctionOracle& f, const Vector& x, const Vector& xbar, double lambda,
                                  const LiminfScheme& scheme = {}, std::size_t ray_resolution = 64,
                                  double tol = kDefaultTol);

}  // namespace varpolar

#endif
