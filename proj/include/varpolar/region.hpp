#ifndef VARPOLAR_REGION_HPP
#define VARPOLAR_REGION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "varpolar/vector.hpp"

namespace varpolar {

inline constexpr std::size_t kDefaultMaxGridDim = 3;
inline constexpr double kDefaultTruncationBound = 10.0;

// A sampleable convex subset of R^n. "Full space" is a box [-B, B]^n; the
// bound is carried in the region and echoed in every report that uses it.
class Region {
public:
    enum class Kind { box, ball, full };

    static Region box(Vector lo, Vector hi);
    static Region ball(Vector center, double radius);
    static Region full(std::size_t dim, double bound = kDefaultTruncationBound);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dim() const noexcept { return lo_.dim(); }
    // Bounding box; equals the region for box and full kinds.
    [[nodiscard]] const Vector& lo() const noexcept { return lo_; }
    [[nodiscard]] const Vector& hi() const noexcept { return hi_; }
    [[nodiscard]] Vector center() const;
    [[nodiscard]] double radius() const noexcept { return radius_; }

    [[nodiscard]] bool contains(const Vector& p) const;
    // Strict interior membership.
    [[nodiscard]] bool contains_interior(const Vector& p) const;

    // Largest per-axis grid spacing at the given resolution.
    [[nodiscard]] double spacing(std::size_t resolution) const;

    // Box-shaped copy shrunk (cells < 0: grown) by `cells` grid cells per side.
    [[nodiscard]] Region shrunk(double cells, std::size_t resolution) const;
    [[nodiscard]] Region grown(double margin) const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const Region&, const Region&) = default;

private:
    Region(Kind k, Vector lo, Vector hi, double radius) : kind_(k), lo_(std::move(lo)), hi_(std::move(hi)), radius_(radius) {}

    Kind kind_;
    Vector lo_;
    Vector hi_;
    double radius_ = 0.0;
};

const char* to_string(Region::Kind k) noexcept;

// Deterministic tensor grid of member points, axis 0 varying slowest.
// Boxes include both endpoints of every axis; balls keep the member points of
// their bounding-box grid. Throws DimensionError when resolution < 2 or
// dim > max_dim.
std::vector<Vector> sample_region(const Region& r, std::size_t resolution,
                                  std::size_t max_dim = kDefaultMaxGridDim);

// Uniform grid of `count` points on [lo, hi], endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t count);

// Deterministic unit directions. Dimension 1 gives {-1, +1}; dimension 2 gives
// equally spaced angles (a multiple of 4, so the axes are included); dimension
// 3 normalizes a cube-surface grid. At least `min_count` directions for n >= 2.
std::vector<Vector> sphere_directions(std::size_t dim, std::size_t min_count);

}  // namespace varpolar

#endif
