#ifndef VARPOLAR_ORACLE_HPP
#define VARPOLAR_ORACLE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varpolar/extreal.hpp"
#include "varpolar/vector.hpp"

namespace varpolar {

// A precondition on a point failed, typically x-bar outside dom f.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed convex set of covectors, as returned by exact subdifferential
// oracles: an interval in 1-D (endpoints may be infinite), a segment or
// singleton in n-D, or a Euclidean ball.
class CovectorSet {
public:
    enum class Kind { empty, interval, segment, ball };

    static CovectorSet empty(std::size_t dim);
    static CovectorSet interval(double lo, double hi);
    static CovectorSet singleton(Vector v);
    static CovectorSet segment(Vector a, Vector b);
    static CovectorSet ball(Vector center, double radius);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool is_empty() const noexcept { return kind_ == Kind::empty; }
    [[nodiscard]] bool is_bounded() const noexcept;

    [[nodiscard]] bool contains(const Vector& xstar, double tol) const;

    // Finite representatives: {low, mid, high} for intervals, the vertices of
    // a segment, center plus `ball_points` boundary points for a ball.
    // Unbounded ends are clipped to [-bound, bound]; `truncated` is set when
    // clipping happened.
    struct Representatives {
        std::vector<Vector> covectors;
        bool truncated = false;
    };
    [[nodiscard]] Representatives representatives(double bound, std::size_t ball_points = 16) const;

    // Interval endpoints (1-D only).
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] const std::vector<Vector>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] double ball_radius() const noexcept { return radius_; }

private:
    CovectorSet(Kind k, std::size_t dim) : kind_(k), dim_(dim) {}

    Kind kind_;
    std::size_t dim_;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<Vector> vertices_;  // segment ends, or the ball center
    double radius_ = 0.0;
};

struct OracleMeta {
    bool is_convex = false;
    std::string domain_description;
};

// An evaluable proper lsc function R^n -> ]-inf, +inf]. Lower semicontinuity
// and properness are taken from the metadata, not verified.
struct FunctionOracle {
    using Eval = std::function<ExtReal(const Vector&)>;
    using Subderivative = std::function<ExtReal(const Vector& xbar, const Vector& d)>;
    using Subdifferential = std::function<CovectorSet(const Vector& x)>;

    std::string id;
    std::size_t dim = 1;
    Eval eval;
    OracleMeta meta;
    std::optional<Subderivative> exact_subderivative;
    std::optional<Subdifferential> exact_subdifferential;

    ExtReal operator()(const Vector& x) const;
};

// f(y) - <x*, y>; +inf is preserved.
ExtReal eval_shifted(const FunctionOracle& f, const Vector& xstar, const Vector& y);

// Evaluates f at xbar and throws DomainError unless the value is finite.
double require_in_domain(const FunctionOracle& f, const Vector& xbar, const char* context);

}  // namespace varpolar

#endif
