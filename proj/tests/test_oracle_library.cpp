#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "varpolar/library.hpp"

using namespace varpolar;

namespace {

// One-sided difference quotient at a single small step; an independent
// reference for the piecewise linear/quadratic library functions.
ExtReal forward_quotient(const FunctionOracle& f, const Vector& x, const Vector& d, double t = 1e-7) {
    const ExtReal fx = f(x);
    const ExtReal fy = f(x + t * d);
    if (fy.is_infinite()) return ExtReal::infinity();
    return ExtReal((fy.raw() - fx.raw()) / t);
}

std::vector<Vector> probe_directions(std::size_t dim) {
    if (dim == 1) return {Vector{-1.5}, Vector{-1.0}, Vector{0.5}, Vector{2.0}};
    return {Vector{1.0, 0.0}, Vector{0.0, -1.0}, Vector{0.6, 0.8}, Vector{-1.0, 2.0}};
}

}  // namespace

TEST_CASE("library ids are stable and resolvable") {
    const std::vector<std::string> expected{"abs", "square", "neg_abs", "ind_halfline", "ind_origin",
                                            "relu", "twowell", "norm2d", "mixed2d"};
    for (const auto& id : expected) CHECK(find_function(id).id == id);
    CHECK(library_ids().size() == test_library().size());
    CHECK_THROWS_AS(find_function("bogus"), UnknownFunctionError);
    CHECK(default_region(find_function("twowell")) == Region::box(Vector{-1.0}, Vector{3.0}));
    CHECK(default_region(find_function("norm2d")) == Region::box(Vector{-2.0, -2.0}, Vector{2.0, 2.0}));
}

TEST_CASE("oracle checks dimensions") {
    CHECK_THROWS_AS(find_function("abs")(Vector{1.0, 2.0}), DimensionError);
    CHECK_THROWS_AS(require_in_domain(find_function("ind_halfline"), Vector{-1.0}, "t"), DomainError);
    CHECK(eval_shifted(find_function("square"), Vector{1.0}, Vector{3.0}) == ExtReal(6.0));
    CHECK(eval_shifted(find_function("ind_origin"), Vector{1.0}, Vector{3.0}).is_infinite());
}

TEST_CASE("exact subderivatives match one-sided difference quotients") {
    for (const auto& f : test_library()) {
        for (const Vector& x : sample_region(default_region(f), f.dim == 1 ? 33 : 9)) {
            if (f(x).is_infinite()) continue;
            for (const Vector& d : probe_directions(f.dim)) {
                CAPTURE(f.id);
                CAPTURE(x);
                CAPTURE(d);
                REQUIRE(f.exact_subderivative);
                const ExtReal exact = (*f.exact_subderivative)(x, d);
                const ExtReal fd = forward_quotient(f, x, d);
                if (exact.is_infinite()) {
                    CHECK(fd.is_infinite());
                } else {
                    REQUIRE(fd.is_finite());
                    CHECK(std::abs(exact.raw() - fd.raw()) <= 1e-5);
                }
            }
        }
    }
}

TEST_CASE("exact subdifferentials satisfy the subgradient inequality on a grid") {
    for (const auto& f : test_library()) {
        if (!f.exact_subdifferential) {
            CHECK_FALSE(f.meta.is_convex);
            continue;
        }
        CHECK(f.meta.is_convex);
        const auto probe = sample_region(default_region(f).grown(1.0), f.dim == 1 ? 121 : 25);
        for (const Vector& x : sample_region(default_region(f), f.dim == 1 ? 17 : 5)) {
            const auto set = (*f.exact_subdifferential)(x);
            if (f(x).is_infinite()) {
                CHECK(set.is_empty());
                continue;
            }
            const auto reps = set.representatives(kDefaultTruncationBound);
            REQUIRE_FALSE(reps.covectors.empty());
            for (const Vector& xs : reps.covectors) {
                CHECK(set.contains(xs, 1e-12));
                for (const Vector& y : probe) {
                    const ExtReal fy = f(y);
                    if (fy.is_infinite()) continue;
                    CAPTURE(f.id);
                    CAPTURE(x);
                    CAPTURE(xs);
                    CAPTURE(y);
                    CHECK(xs.dot(y - x) + f(x).raw() <= fy.raw() + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("covector sets") {
    const auto iv = CovectorSet::interval(-1.0, 1.0);
    CHECK(iv.contains(Vector{0.5}, 0.0));
    CHECK_FALSE(iv.contains(Vector{1.1}, 1e-6));
    CHECK(iv.representatives(10.0).covectors == std::vector<Vector>{Vector{-1.0}, Vector{0.0}, Vector{1.0}});
    CHECK_FALSE(iv.representatives(10.0).truncated);

    const auto half = CovectorSet::interval(-std::numeric_limits<double>::infinity(), 0.0);
    CHECK_FALSE(half.is_bounded());
    const auto reps = half.representatives(10.0);
    CHECK(reps.truncated);
    CHECK(reps.covectors.front() == Vector{-10.0});
    CHECK(reps.covectors.back() == Vector{0.0});

    const auto ball = CovectorSet::ball(Vector{0.0, 0.0}, 1.0);
    const auto br = ball.representatives(10.0, 16);
    CHECK(br.covectors.size() == 17);
    for (const auto& v : br.covectors) CHECK(v.norm() <= 1.0 + 1e-12);
    CHECK_FALSE(ball.contains(Vector{0.8, 0.8}, 1e-6));

    const auto seg = CovectorSet::segment(Vector{0.0, -1.0}, Vector{0.0, 1.0});
    CHECK(seg.contains(Vector{0.0, 0.3}, 1e-12));
    CHECK_FALSE(seg.contains(Vector{0.1, 0.3}, 1e-6));
    CHECK(CovectorSet::empty(1).representatives(10.0).covectors.empty());
}
