#include "varpolar/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "varpolar/region.hpp"

namespace varpolar {

CovectorSet CovectorSet::empty(std::size_t dim) { return CovectorSet(Kind::empty, dim); }

CovectorSet CovectorSet::interval(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw DimensionError("CovectorSet::interval: need lo <= hi");
    CovectorSet s(Kind::interval, 1);
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
}

CovectorSet CovectorSet::singleton(Vector v) {
    if (v.dim() == 1) return interval(v[0], v[0]);
    return segment(v, v);
}

CovectorSet CovectorSet::segment(Vector a, Vector b) {
    require_same_dim(a, b, "CovectorSet::segment");
    if (a.dim() == 1) return interval(std::min(a[0], b[0]), std::max(a[0], b[0]));
    CovectorSet s(Kind::segment, a.dim());
    s.vertices_.push_back(std::move(a));
    if (!(b == s.vertices_.front())) s.vertices_.push_back(std::move(b));
    return s;
}

CovectorSet CovectorSet::ball(Vector center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw DimensionError("CovectorSet::ball: bad radius");
    if (center.dim() == 1) return interval(center[0] - radius, center[0] + radius);
    CovectorSet s(Kind::ball, center.dim());
    s.vertices_.push_back(std::move(center));
    s.radius_ = radius;
    return s;
}

bool CovectorSet::is_bounded() const noexcept {
    if (kind_ == Kind::interval) return std::isfinite(lo_) && std::isfinite(hi_);
    return true;
}

bool CovectorSet::contains(const Vector& xstar, double tol) const {
    if (xstar.dim() != dim_) throw DimensionError("CovectorSet::contains: dimension mismatch");
    switch (kind_) {
        case Kind::empty: return false;
        case Kind::interval: return xstar[0] >= lo_ - tol && xstar[0] <= hi_ + tol;
        case Kind::ball: return distance(xstar, vertices_.front()) <= radius_ + tol;
        case Kind::segment: {
            const Vector& a = vertices_.front();
            if (vertices_.size() == 1) return distance(xstar, a) <= tol;
            const Vector ab = vertices_.back() - a;
            const double s = std::clamp((xstar - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
            return distance(xstar, a + s * ab) <= tol;
        }
    }
    return false;
}

CovectorSet::Representatives CovectorSet::representatives(double bound, std::size_t ball_points) const {
    Representatives out;
    switch (kind_) {
        case Kind::empty: break;
        case Kind::interval: {
            auto clip = [&](double v) {
                if (v < -bound || v > bound) out.truncated = true;
                return std::clamp(v, -bound, bound);
            };
            const double lo = clip(lo_), hi = clip(hi_);
            if (lo > hi) break;  // interval entirely outside the box
            out.covectors.push_back(Vector{lo});
            if (hi > lo) {
                out.covectors.push_back(Vector{0.5 * (lo + hi)});
                out.covectors.push_back(Vector{hi});
            }
            break;
        }
        case Kind::segment:
            out.covectors = vertices_;
            break;
        case Kind::ball: {
            out.covectors.push_back(vertices_.front());
            if (radius_ > 0.0)
                for (const Vector& u : sphere_directions(dim_, ball_points))
                    out.covectors.push_back(vertices_.front() + radius_ * u);
            break;
        }
    }
    return out;
}

ExtReal FunctionOracle::operator()(const Vector& x) const {
    if (x.dim() != dim)
        throw DimensionError("FunctionOracle '" + id + "': expected dimension " + std::to_string(dim) + ", got " +
                             std::to_string(x.dim()));
    return eval(x);
}

ExtReal eval_shifted(const FunctionOracle& f, const Vector& xstar, const Vector& y) {
    if (xstar.dim() != f.dim || y.dim() != f.dim) throw DimensionError("eval_shifted: dimension mismatch");
    return f(y) - xstar.dot(y);
}

double require_in_domain(const FunctionOracle& f, const Vector& xbar, const char* context) {
    const ExtReal v = f(xbar);
    if (v.is_infinite())
        throw DomainError(std::string(context) + ": point " + xbar.to_string() + " is outside dom " + f.id);
    return v.value();
}

}  // namespace varpolar
