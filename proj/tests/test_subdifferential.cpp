#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varpolar/library.hpp"
#include "varpolar/subdifferential.hpp"

using namespace varpolar;

namespace {

const Region kLine = Region::box(Vector{-2.0}, Vector{2.0});
const Region kUnit = Region::box(Vector{-1.0}, Vector{1.0});

bool has_pair(const GraphSample& g, double x, double xs) {
    return g.contains(GraphPair{Vector{x}, Vector{xs}});
}

FunctionOracle shifted(const FunctionOracle& f, const Vector& xstar) {
    FunctionOracle g;
    g.id = f.id + "_shifted";
    g.dim = f.dim;
    g.meta = f.meta;
    g.eval = [&f, xstar](const Vector& y) { return eval_shifted(f, xstar, y); };
    return g;
}

FunctionOracle affine_1d(double a) {
    FunctionOracle g;
    g.id = "affine";
    g.dim = 1;
    g.meta = {true, "R"};
    g.eval = [a](const Vector& y) { return ExtReal(a * y[0]); };
    return g;
}

FunctionOracle distance_1d(double c) {
    FunctionOracle g;
    g.id = "distance";
    g.dim = 1;
    g.meta = {true, "R"};
    g.eval = [c](const Vector& y) { return ExtReal(std::abs(y[0] - c)); };
    return g;
}

// Brute-force enlargement: the three conditions spelled out directly.
std::vector<GraphPair> brute_enlargement(const GraphSample& g, const FunctionOracle& f, const Vector& xbar, double eps) {
    std::vector<GraphPair> out;
    for (const auto& p : g) {
        const double dist = distance(p.point, xbar);
        const double fgap = std::abs(f(p.point).raw() - f(xbar).raw());
        const double pairing = p.covector.dot(p.point - xbar);
        if (dist <= eps && fgap <= eps && pairing <= eps) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("convex subdifferential membership") {
    const auto& ab = find_function("abs");
    const Region probe = Region::full(1);
    CHECK(convex_subdiff_contains(ab, Vector{0.0}, Vector{0.5}, probe, 81).contains);
    const auto out = convex_subdiff_contains(ab, Vector{0.0}, Vector{2.0}, probe, 81);
    CHECK_FALSE(out.contains);
    // brute force: max over the grid of 2y - |y|, attained at y = 10
    double brute = -1e300;
    Vector arg{0.0};
    for (const Vector& y : sample_region(probe, 81))
        if (2.0 * y[0] - std::abs(y[0]) > brute) {
            brute = 2.0 * y[0] - std::abs(y[0]);
            arg = y;
        }
    CHECK(out.residual == doctest::Approx(brute));
    REQUIRE(out.witness);
    CHECK(*out.witness == arg);
    CHECK(convex_subdiff_contains(find_function("square"), Vector{1.0}, Vector{2.0}, probe, 81).contains);
    CHECK_THROWS_AS(convex_subdiff_contains(find_function("ind_halfline"), Vector{-1.0}, Vector{0.0}, probe, 9),
                    DomainError);
}

TEST_CASE("Clarke subdifferential membership") {
    const auto& na = find_function("neg_abs");
    CHECK(clarke_subdiff_contains(na, Vector{0.0}, Vector{1.0}).contains);
    CHECK(clarke_subdiff_contains(na, Vector{0.0}, Vector{-1.0}).contains);
    const auto out = clarke_subdiff_contains(na, Vector{0.0}, Vector{2.0});
    CHECK_FALSE(out.contains);
    REQUIRE(out.witness);
    CHECK(*out.witness == Vector{1.0});
    CHECK(out.residual == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(clarke_subdiff_contains(find_function("square"), Vector{0.0}, Vector{0.0}).contains);
    CHECK(clarke_subdiff_contains(find_function("norm2d"), Vector{0.0, 0.0}, Vector{0.6, -0.7}).contains);
    CHECK_FALSE(clarke_subdiff_contains(find_function("norm2d"), Vector{0.0, 0.0}, Vector{0.9, 0.9}).contains);
}

TEST_CASE("inclusion chain: convex membership implies Clarke membership") {
    const auto covs = linspace(-3.0, 3.0, 25);
    for (const auto& f : test_library()) {
        if (f.dim != 1) continue;
        for (const Vector& x : sample_region(default_region(f), 9)) {
            if (f(x).is_infinite()) continue;
            const auto support = clarke_support(f, x, sphere_directions(1, 2));
            for (double c : covs) {
                CAPTURE(f.id);
                CAPTURE(x);
                CAPTURE(c);
                // probe beyond the region so boundary points get a two-sided test
                if (convex_subdiff_contains(f, x, Vector{c}, default_region(f).shrunk(-2.0, 9), 81).contains)
                    CHECK(clarke_membership(support, Vector{c}, 1e-6).contains);
            }
        }
    }
    for (const char* id : {"norm2d", "mixed2d"}) {
        const auto& f = find_function(id);
        for (const Vector& x : sample_region(default_region(f), 3))
            for (const Vector& c : sample_region(Region::box(Vector{-2.0, -2.0}, Vector{2.0, 2.0}), 5))
                if (convex_subdiff_contains(f, x, c, default_region(f).shrunk(-2.0, 3), 17).contains) {
                    CAPTURE(x);
                    CAPTURE(c);
                    CHECK(clarke_subdiff_contains(f, x, c).contains);
                }
    }
}

TEST_CASE("shift rule at the membership level") {
    const auto covs = linspace(-2.0, 2.0, 9);
    for (const char* id : {"abs", "square", "neg_abs", "relu", "twowell"}) {
        const auto& f = find_function(id);
        for (double xs : {-1.0, 0.5}) {
            const FunctionOracle g = shifted(f, Vector{xs});
            for (const Vector& x : sample_region(default_region(f), 5)) {
                for (double ys : covs) {
                    CAPTURE(id);
                    CAPTURE(x);
                    CAPTURE(ys);
                    CHECK(convex_subdiff_contains(g, x, Vector{ys - xs}, default_region(f), 33).contains ==
                          convex_subdiff_contains(f, x, Vector{ys}, default_region(f), 33).contains);
                    CHECK(clarke_subdiff_contains(g, x, Vector{ys - xs}).contains ==
                          clarke_subdiff_contains(f, x, Vector{ys}).contains);
                }
            }
        }
    }
}

TEST_CASE("graph sampling examples") {
    const auto ab = sample_subdiff_graph(find_function("abs"), kUnit, 3, GraphSource::exact);
    CHECK(has_pair(ab.graph, -1.0, -1.0));
    CHECK(has_pair(ab.graph, 1.0, 1.0));
    for (double s : {-1.0, 0.0, 1.0}) CHECK(has_pair(ab.graph, 0.0, s));
    CHECK(ab.graph.size() == 5);
    CHECK_FALSE(ab.meta.truncated);

    const auto sq = sample_subdiff_graph(find_function("square"), kUnit, 3, GraphSource::exact);
    CHECK(sq.graph.pairs() ==
          std::vector<GraphPair>{{Vector{-1.0}, Vector{-2.0}}, {Vector{0.0}, Vector{0.0}}, {Vector{1.0}, Vector{2.0}}});

    const auto na = sample_subdiff_graph(find_function("neg_abs"), kUnit, 3, GraphSource::clarke_numeric);
    CHECK(has_pair(na.graph, 1.0, -1.0));
    CHECK(has_pair(na.graph, -1.0, 1.0));
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) CHECK(has_pair(na.graph, 0.0, s));
    for (const auto& p : na.graph) CHECK(std::abs(p.covector[0]) <= 1.0 + 1e-6);

    CHECK_THROWS_AS(sample_subdiff_graph(find_function("neg_abs"), kUnit, 3, GraphSource::exact), std::invalid_argument);
    CHECK(preferred_source(find_function("twowell")) == GraphSource::clarke_numeric);
    CHECK(preferred_source(find_function("relu")) == GraphSource::exact);
    CHECK(parse_graph_source("clarke-numeric") == GraphSource::clarke_numeric);
    CHECK_THROWS(parse_graph_source("limiting"));
}

TEST_CASE("unbounded subdifferentials are truncated and flagged") {
    const auto g = sample_subdiff_graph(find_function("ind_halfline"), kLine, 5, GraphSource::exact);
    CHECK(g.meta.truncated);
    REQUIRE(g.meta.truncated_points.size() == 1);
    CHECK(g.meta.truncated_points.front() == Vector{0.0});
    CHECK(has_pair(g.graph, 0.0, -kDefaultTruncationBound));
    for (const auto& p : g.graph) CHECK(p.point[0] >= 0.0);

    const auto c = sample_subdiff_graph(find_function("ind_halfline"), kLine, 5, GraphSource::clarke_numeric);
    CHECK(c.meta.truncated);
    for (const auto& p : c.graph) CHECK(p.covector[0] <= 1e-6);

    std::ostringstream meta;
    write_graph_meta(meta, g.meta);
    CHECK(meta.str().find("\"truncated\": true") != std::string::npos);
}

TEST_CASE("Clarke-numeric graph agrees with the exact graph on convex functions") {
    for (const char* id : {"abs", "square", "relu"}) {
        const auto& f = find_function(id);
        const auto num = sample_subdiff_graph(f, kLine, 9, GraphSource::clarke_numeric);
        for (const auto& p : num.graph) {
            CAPTURE(id);
            CAPTURE(p.point);
            CAPTURE(p.covector);
            CHECK((*f.exact_subdifferential)(p.point).contains(p.covector, 1e-3));
        }
    }
}

TEST_CASE("graph CSV round trip") {
    const auto g = sample_subdiff_graph(find_function("norm2d"), Region::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0}), 3,
                                        GraphSource::exact);
    std::stringstream ss;
    write_graph_csv(ss, g.graph);
    CHECK(ss.str().rfind("x_1,x_2,xstar_1,xstar_2\n", 0) == 0);
    const auto back = read_graph_csv(ss);
    CHECK(back.pairs() == g.graph.pairs());
}

TEST_CASE("epsilon enlargement matches a brute-force filter") {
    const auto& ab = find_function("abs");
    const auto g = sample_subdiff_graph(ab, kUnit, 9, GraphSource::exact);
    const auto e = epsilon_enlargement(g.graph, ab, Vector{0.0}, {0.5});
    CHECK(e.pairs() == brute_enlargement(g.graph, ab, Vector{0.0}, 0.5));
    CHECK(has_pair(e, 0.25, 1.0));
    CHECK_FALSE(has_pair(e, 1.0, 1.0));
    CHECK(e.is_subset_of(g.graph));

    const auto& sq = find_function("square");
    const auto fine = sample_subdiff_graph(sq, kUnit, 257, GraphSource::exact);
    const auto tiny = epsilon_enlargement(fine.graph, sq, Vector{0.0}, {1e-9});
    REQUIRE(tiny.size() == 1);
    CHECK(tiny.pairs().front() == GraphPair{Vector{0.0}, Vector{0.0}});
    CHECK_THROWS(epsilon_enlargement(g.graph, ab, Vector{0.0}, {0.0}));
}

TEST_CASE("enlargement monotonicity and zero-distance pairs") {
    for (const auto& f : test_library()) {
        const auto g = sample_subdiff_graph(f, default_region(f), f.dim == 1 ? 33 : 9, preferred_source(f));
        for (const Vector& xbar : sample_region(default_region(f), f.dim == 1 ? 9 : 3)) {
            if (f(xbar).is_infinite()) continue;
            std::vector<GraphSample> levels;
            for (double eps : {2.0, 1.0, 0.5, 0.125, 1e-3}) levels.push_back(epsilon_enlargement(g.graph, f, xbar, {eps}));
            for (std::size_t i = 1; i < levels.size(); ++i) CHECK(levels[i].is_subset_of(levels[i - 1]));
            for (const auto& p : g.graph)
                if (p.point == xbar) CHECK(levels.back().contains(p));
        }
    }
}

TEST_CASE("subderivative versus enlarged subdifferential support") {
    const auto sq = cdd_inequality_check(find_function("square"), Vector{0.0}, Vector{1.0});
    CHECK(sq.verdict.holds);
    CHECK(std::abs(sq.lhs.raw()) <= 1e-6);
    // the enlargement at the smallest eps still reaches one grid cell away
    CHECK(sq.rhs.raw() >= -1e-12);
    CHECK(sq.rhs.raw() <= 5e-3);

    const auto ab = cdd_inequality_check(find_function("abs"), Vector{0.0}, Vector{1.0});
    CHECK(ab.verdict.holds);
    CHECK(ab.lhs == ExtReal(1.0));
    CHECK(ab.rhs == ExtReal(1.0));
    CHECK(ab.enlargement_sizes.size() == 11);
    for (auto n : ab.enlargement_sizes) CHECK(n > 0);

    const auto io = cdd_inequality_check(find_function("ind_origin"), Vector{0.0}, Vector{1.0});
    CHECK(io.verdict.holds);
    CHECK(io.lhs.is_infinite());
    CHECK(io.rhs.is_infinite());
    CHECK(io.truncated);
    CHECK(io.rhs_grid == doctest::Approx(kDefaultTruncationBound));

    CddParams coarse;
    coarse.eps_list = {1e-3};
    coarse.resolution = 2;
    // a 2-point grid around the isolated domain point misses it
    const auto under = cdd_inequality_check(find_function("ind_origin"), Vector{0.0}, Vector{1.0}, coarse);
    CHECK_FALSE(under.verdict.holds);
    REQUIRE(under.verdict.witness.parameter);
    CHECK(*under.verdict.witness.parameter == 1e-3);
}

TEST_CASE("separation principle smoke test") {
    // phi convex Lipschitz; whenever f + phi has a grid local minimum at xbar,
    // some sampled Clarke subgradient of f cancels a subgradient of phi.
    std::vector<FunctionOracle> phis{affine_1d(-1.0), affine_1d(0.5), affine_1d(1.0), distance_1d(0.5),
                                     distance_1d(-1.0)};
    const auto covs = linspace(-5.0, 5.0, 101);
    std::size_t checked = 0;
    for (const auto& f : test_library()) {
        if (f.dim != 1) continue;
        const auto grid = sample_region(default_region(f), 33);
        for (const auto& phi : phis) {
            for (std::size_t i = 3; i + 3 < grid.size(); ++i) {
                const Vector& xbar = grid[i];
                if (f(xbar).is_infinite()) continue;
                const double v = f(xbar).raw() + phi(xbar).raw();
                bool local_min = true;
                for (std::size_t j = (i >= 3 ? i - 3 : 0); j < std::min(grid.size(), i + 4); ++j) {
                    const ExtReal fy = f(grid[j]);
                    if (fy.is_finite() && fy.raw() + phi(grid[j]).raw() < v - 1e-12) local_min = false;
                }
                if (!local_min) continue;
                const auto support = clarke_support(f, xbar, sphere_directions(1, 2));
                bool found = false;
                for (double c1 : covs) {
                    if (!clarke_membership(support, Vector{c1}, 1e-6).contains) continue;
                    if (convex_subdiff_contains(phi, xbar, Vector{-c1}, Region::full(1), 81).contains) {
                        found = true;
                        break;
                    }
                }
                CAPTURE(f.id);
                CAPTURE(phi.id);
                CAPTURE(xbar);
                CHECK(found);
                ++checked;
            }
        }
    }
    CHECK(checked >= 10);
}
