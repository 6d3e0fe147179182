#include "varpolar/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace varpolar {

Region Region::box(Vector lo, Vector hi) {
    require_same_dim(lo, hi, "Region::box");
    for (std::size_t i = 0; i < lo.dim(); ++i)
        if (!(lo[i] < hi[i])) throw DimensionError("Region::box: need lo < hi on every axis");
    return Region(Kind::box, std::move(lo), std::move(hi), 0.0);
}

Region Region::ball(Vector center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DimensionError("Region::ball: radius must be > 0");
    std::vector<double> lo(center.dim()), hi(center.dim());
    for (std::size_t i = 0; i < center.dim(); ++i) {
        lo[i] = center[i] - radius;
        hi[i] = center[i] + radius;
    }
    return Region(Kind::ball, Vector(lo), Vector(hi), radius);
}

Region Region::full(std::size_t dim, double bound) {
    if (!(bound > 0.0) || !std::isfinite(bound)) throw DimensionError("Region::full: bound must be > 0");
    if (dim == 0) throw DimensionError("Region::full: dimension must be positive");
    std::vector<double> l(dim, -bound), h(dim, bound);
    return Region(Kind::full, Vector(l), Vector(h), 0.0);
}

Vector Region::center() const { return 0.5 * (lo_ + hi_); }

bool Region::contains(const Vector& p) const {
    require_same_dim(p, lo_, "Region::contains");
    if (kind_ == Kind::ball) return distance(p, center()) <= radius_;
    for (std::size_t i = 0; i < p.dim(); ++i)
        if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
    return true;
}

bool Region::contains_interior(const Vector& p) const {
    require_same_dim(p, lo_, "Region::contains_interior");
    if (kind_ == Kind::ball) return distance(p, center()) < radius_;
    for (std::size_t i = 0; i < p.dim(); ++i)
        if (p[i] <= lo_[i] || p[i] >= hi_[i]) return false;
    return true;
}

double Region::spacing(std::size_t resolution) const {
    if (resolution < 2) throw DimensionError("Region::spacing: resolution must be >= 2");
    double h = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) h = std::max(h, (hi_[i] - lo_[i]) / double(resolution - 1));
    return h;
}

Region Region::shrunk(double cells, std::size_t resolution) const {
    if (resolution < 2) throw DimensionError("Region::shrunk: resolution must be >= 2");
    if (kind_ == Kind::ball) return ball(center(), radius_ - cells * spacing(resolution));
    std::vector<double> lo(dim()), hi(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        const double h = (hi_[i] - lo_[i]) / double(resolution - 1);
        lo[i] = lo_[i] + cells * h;
        hi[i] = hi_[i] - cells * h;
    }
    return box(Vector(lo), Vector(hi));
}

Region Region::grown(double margin) const {
    if (kind_ == Kind::ball) return ball(center(), radius_ + margin);
    std::vector<double> lo(dim()), hi(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        lo[i] = lo_[i] - margin;
        hi[i] = hi_[i] + margin;
    }
    return box(Vector(lo), Vector(hi));
}

std::string Region::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_);
    if (kind_ == Kind::ball)
        os << " center=" << center() << " radius=" << radius_;
    else
        os << " lo=" << lo_ << " hi=" << hi_;
    return os.str();
}

const char* to_string(Region::Kind k) noexcept {
    switch (k) {
        case Region::Kind::box: return "box";
        case Region::Kind::ball: return "ball";
        case Region::Kind::full: return "full";
    }
    return "?";
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw DimensionError("linspace: need at least 2 points");
    std::vector<double> out(count);
    const double step = (hi - lo) / double(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + double(i) * step;
    out.back() = hi;
    return out;
}

std::vector<Vector> sample_region(const Region& r, std::size_t resolution, std::size_t max_dim) {
    if (resolution < 2) throw DimensionError("sample_region: resolution must be >= 2");
    const std::size_t n = r.dim();
    if (n > max_dim)
        throw DimensionError("sample_region: dimension " + std::to_string(n) + " exceeds grid cap " +
                             std::to_string(max_dim));
    std::vector<std::vector<double>> axes(n);
    for (std::size_t i = 0; i < n; ++i) axes[i] = linspace(r.lo()[i], r.hi()[i], resolution);

    std::vector<Vector> out;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> p(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) p[i] = axes[i][idx[i]];
        Vector v{std::span<const double>(p)};
        if (r.kind() != Region::Kind::ball || r.contains(v)) out.push_back(std::move(v));
        std::size_t axis = n;
        while (axis > 0) {
            --axis;
            if (++idx[axis] < resolution) break;
            idx[axis] = 0;
            if (axis == 0) return out;
        }
    }
}

std::vector<Vector> sphere_directions(std::size_t dim, std::size_t min_count) {
    if (dim == 0) throw DimensionError("sphere_directions: dimension must be positive");
    if (dim == 1) return {Vector{-1.0}, Vector{1.0}};
    if (dim == 2) {
        std::size_t m = std::max<std::size_t>(4, (min_count + 3) / 4 * 4);
        std::vector<Vector> out;
        out.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            // Quarter turns are placed exactly so the axes carry no rounding.
            const std::size_t q = j * 4 / m;
            if (j * 4 % m == 0) {
                static const double axes[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
                out.push_back(Vector{axes[q][0], axes[q][1]});
                continue;
            }
            const double th = 2.0 * std::numbers::pi * double(j) / double(m);
            out.push_back(Vector{std::cos(th), std::sin(th)});
        }
        return out;
    }
    // Cube surface grid with m (odd) points per edge, normalized.
    for (std::size_t m = 3;; m += 2) {
        std::set<Vector> seen;
        std::vector<Vector> out;
        const auto ticks = linspace(-1.0, 1.0, m);
        std::vector<std::size_t> idx(dim, 0);
        std::vector<double> p(dim);
        bool done = false;
        while (!done) {
            bool on_face = false;
            for (std::size_t i = 0; i < dim; ++i) {
                p[i] = ticks[idx[i]];
                on_face = on_face || idx[i] == 0 || idx[i] == m - 1;
            }
            if (on_face) {
                Vector v{std::span<const double>(p)};
                v *= 1.0 / v.norm();
                if (seen.insert(v).second) out.push_back(std::move(v));
            }
            std::size_t axis = dim;
            done = true;
            while (axis > 0) {
                --axis;
                if (++idx[axis] < m) { done = false; break; }
                idx[axis] = 0;
            }
        }
        if (out.size() >= min_count) return out;
    }
}

}  // namespace varpolar
