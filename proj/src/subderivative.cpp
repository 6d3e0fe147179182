#include "varpolar/subderivative.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varpolar/region.hpp"

namespace varpolar {

namespace {

constexpr double kMinStep = 1e-12;

// (f(x + t*dir) - fx) / t * scale, with +inf preserved.
ExtReal quotient(const FunctionOracle& f, const Vector& x, double fx, const Vector& dir, double t, double scale) {
    const ExtReal v = f(x + t * dir);
    if (v.is_infinite()) return ExtReal::infinity();
    return ExtReal((v.raw() - fx) / t * scale);
}

}  // namespace

void LiminfScheme::validate() const {
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw std::invalid_argument("LiminfScheme: t0 must be > 0");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("LiminfScheme: ratio must lie in (0, 1)");
    if (steps == 0) throw std::invalid_argument("LiminfScheme: steps must be positive");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("LiminfScheme: tail_fraction must lie in (0, 1]");
    if (t0 * std::pow(ratio, double(steps - 1)) < kMinStep)
        throw std::invalid_argument("LiminfScheme: smallest step t0*ratio^(steps-1) is below 1e-12");
}

std::size_t LiminfScheme::tail_size() const {
    const auto n = static_cast<std::size_t>(std::ceil(tail_fraction * double(steps) - 1e-9));
    return std::clamp<std::size_t>(n, 1, steps);
}

std::vector<double> LiminfScheme::tail_steps() const {
    validate();
    std::vector<double> out;
    const std::size_t first = steps - tail_size();
    double t = t0;
    for (std::size_t k = 0; k < steps; ++k, t *= ratio)
        if (k >= first) out.push_back(t);
    return out;
}

SubderivEstimate lower_dini(const FunctionOracle& f, const Vector& xbar, const Vector& d, const LiminfScheme& scheme) {
    if (xbar.dim() != f.dim || d.dim() != f.dim) throw DimensionError("lower_dini: dimension mismatch");
    const double fx = require_in_domain(f, xbar, "lower_dini");
    const auto ts = scheme.tail_steps();
    const double len = d.norm();
    if (len == 0.0) return {ExtReal(0.0), ExtReal(0.0), ExtReal(0.0), scheme};

    const Vector u = (1.0 / len) * d;
    ExtReal lo = ExtReal::infinity();
    ExtReal hi(-std::numeric_limits<double>::max());
    for (double t : ts) {
        const ExtReal q = quotient(f, xbar, fx, u, t, len);
        lo = min(lo, q);
        hi = max(hi, q);
    }
    return {lo, lo, hi, scheme};
}

void ClarkeParams::validate() const {
    if (deltas.empty()) throw std::invalid_argument("ClarkeParams: delta list is empty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw std::invalid_argument("ClarkeParams: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("ClarkeParams: deltas must decrease");
    }
    if (nbhd_resolution < 2) throw std::invalid_argument("ClarkeParams: nbhd_resolution must be >= 2");
    if (!(radius_factor > 0.0)) throw std::invalid_argument("ClarkeParams: radius_factor must be > 0");
}

SubderivEstimate clarke_directional(const FunctionOracle& f, const Vector& xbar, const Vector& d,
                                    const LiminfScheme& scheme, const ClarkeParams& params) {
    if (xbar.dim() != f.dim || d.dim() != f.dim) throw DimensionError("clarke_directional: dimension mismatch");
    params.validate();
    const double fx = require_in_domain(f, xbar, "clarke_directional");
    const auto ts = scheme.tail_steps();
    const std::size_t n = f.dim;

    // Step lengths are measured along d so that, at the center direction,
    // the sampled points coincide with those of lower_dini.
    const double len = d.norm();
    const double step_scale = len > 0.0 ? 1.0 / len : 1.0;
    const auto offsets = sample_region(Region::ball(Vector::zeros(n), 1.0), params.nbhd_resolution, n);

    ExtReal best(-std::numeric_limits<double>::max());
    ExtReal best_low = best;
    std::vector<Vector> dirs;
    dirs.reserve(2 * n + 1);
    for (double delta : params.deltas) {
        dirs.clear();
        dirs.push_back(d);
        for (std::size_t i = 0; i < n; ++i) {
            dirs.push_back(d + delta * Vector::unit(n, i));
            dirs.push_back(d - delta * Vector::unit(n, i));
        }
        ExtReal level_max(-std::numeric_limits<double>::max());
        ExtReal level_min = ExtReal::infinity();
        for (double t : ts) {
            const double r = params.radius_factor * t;
            const double step = t * step_scale;
            ExtReal at_step(-std::numeric_limits<double>::max());
            for (const Vector& off : offsets) {
                const Vector x = xbar + r * off;
                const ExtReal fxv = f(x);
                if (fxv.is_infinite() || std::abs(fxv.raw() - fx) > r) continue;
                ExtReal inner = ExtReal::infinity();
                for (const Vector& dp : dirs) inner = min(inner, quotient(f, x, fxv.raw(), dp, step, 1.0));
                at_step = max(at_step, inner);
            }
            level_max = max(level_max, at_step);
            level_min = min(level_min, at_step);
        }
        if (best < level_max) {
            best = level_max;
            best_low = level_min;
        }
    }
    return {best, best_low, best, scheme};
}

MeanValuePoint mean_value_witness(const FunctionOracle& f, const Vector& x, const Vector& xbar, double lambda,
                                  const LiminfScheme& scheme, std::size_t ray_resolution, double tol) {
    if (x.dim() != f.dim || xbar.dim() != f.dim) throw DimensionError("mean_value_witness: dimension mismatch");
    if (ray_resolution < 2) throw std::invalid_argument("mean_value_witness: ray_resolution must be >= 2");
    if (!std::isfinite(lambda)) throw std::invalid_argument("mean_value_witness: lambda must be finite");
    const double fx = require_in_domain(f, x, "mean_value_witness");
    if (x == xbar) throw std::invalid_argument("mean_value_witness: x and xbar coincide, [x, xbar[ is empty");
    const ExtReal fxbar = f(xbar);
    if (fxbar.is_finite() && lambda > fxbar.raw() - fx + tol)
        throw std::invalid_argument("mean_value_witness: lambda exceeds f(xbar) - f(x)");

    const Vector d = xbar - x;
    std::optional<MeanValuePoint> best;
    auto probe = [&](double s) -> std::optional<MeanValuePoint> {
        const Vector x0 = lerp(x, xbar, s);
        if (f(x0).is_infinite()) return std::nullopt;
        MeanValuePoint p{x0, s, lower_dini(f, x0, d, scheme).value};
        if (!best || best->subderivative < p.subderivative) best = p;
        if (p.subderivative >= ExtReal(lambda - tol)) return p;
        return std::nullopt;
    };

    const double h = 1.0 / double(ray_resolution);
    for (std::size_t j = 0; j < ray_resolution; ++j)
        if (auto p = probe(double(j) * h)) return *p;
    if (best) {
        const double center = best->parameter;
        for (std::size_t j = 0; j <= ray_resolution; ++j) {
            const double s = center - h + 2.0 * h * double(j) / double(ray_resolution);
            if (s < 0.0 || s >= 1.0) continue;
            if (auto p = probe(s)) return *p;
        }
    }
    std::ostringstream msg;
    msg << "mean_value_witness: no point on [" << x << ", " << xbar << "[ reaches lambda=" << lambda;
    if (best) msg << "; best candidate " << best->point << " with subderivative " << best->subderivative;
    msg << " (resolution exhausted or f is not lower semicontinuous)";
    throw MeanValueError(msg.str(), best ? best->point : x, best ? best->subderivative : ExtReal(0.0));
}

}  // namespace varpolar
