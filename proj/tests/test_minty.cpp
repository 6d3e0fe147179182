#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "varpolar/library.hpp"
#include "varpolar/minty.hpp"

using namespace varpolar;

namespace {

const Region kLine = Region::box(Vector{-2.0}, Vector{2.0});

// Direct double loop over grid y and uniform t.
double brute_iar(const FunctionOracle& f, const Vector& xbar, const Region& C, std::size_t res, std::size_t tres) {
    double worst = 0.0;
    for (const Vector& y : sample_region(C, res)) {
        const ExtReal fy = f(y);
        if (fy.is_infinite()) continue;
        for (std::size_t k = 0; k < tres; ++k) {
            const double t = double(k) / double(tres - 1);
            const ExtReal v = f(y + t * (xbar - y));
            const double inc = v.is_infinite() ? std::numeric_limits<double>::infinity() : v.raw() - fy.raw();
            worst = std::max(worst, inc);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("increase along rays examples") {
    const auto sq = iar_check(find_function("square"), Vector{0.0}, kLine, 65);
    CHECK(sq.solution);
    CHECK(sq.residual <= ExtReal(0.0));

    const auto na = iar_check(find_function("neg_abs"), Vector{0.0}, kLine, 65);
    CHECK_FALSE(na.solution);
    CHECK(na.residual == ExtReal(2.0));
    REQUIRE(na.witness.point);
    CHECK(std::abs((*na.witness.point)[0]) == 2.0);
    CHECK(*na.witness.parameter == 1.0);

    const auto tw = iar_check(find_function("twowell"), Vector{0.0}, Region::box(Vector{-1.0}, Vector{3.0}), 65);
    CHECK_FALSE(tw.solution);
    REQUIRE(tw.witness.point);
    CHECK((*tw.witness.point)[0] == doctest::Approx(2.0));
    CHECK(*tw.witness.parameter == doctest::Approx(0.25).epsilon(0.05));
    CHECK(tw.residual.raw() == doctest::Approx(0.5).epsilon(0.02));

    CHECK_THROWS_AS(iar_check(find_function("square"), Vector{3.0}, kLine, 9), DomainError);
}

TEST_CASE("increase along rays matches a brute-force scan") {
    for (const auto& f : test_library()) {
        if (f.dim != 1) continue;
        const Region C = default_region(f);
        for (const Vector& xbar : sample_region(C, 9)) {
            if (f(xbar).is_infinite()) continue;
            CAPTURE(f.id);
            CAPTURE(xbar);
            const auto r = iar_check(f, xbar, C, 33, 17);
            CHECK(r.residual.raw() == doctest::Approx(brute_iar(f, xbar, C, 33, 17)));
        }
    }
}

TEST_CASE("Minty inequality of subderivative type") {
    const auto sq = minty_subderivative(find_function("square"), Vector{0.0}, kLine, 65);
    CHECK(sq.solution);
    CHECK(std::abs(sq.residual.raw()) <= 1e-4);

    const auto na = minty_subderivative(find_function("neg_abs"), Vector{0.0}, kLine, 9);
    CHECK_FALSE(na.solution);
    REQUIRE(na.witness.point);
    CHECK(na.residual.raw() >= 1.0);

    CHECK(minty_subderivative(find_function("abs"), Vector{0.0}, kLine, 65).solution);
    CHECK_FALSE(minty_subderivative(find_function("abs"), Vector{0.5}, kLine, 65).solution);
}

TEST_CASE("Minty inequality of subdifferential type") {
    const Region U = kLine.shrunk(1.0, 65);
    const auto gsq = sample_subdiff_graph(find_function("square"), kLine, 65, GraphSource::exact);
    const auto sq = minty_subdifferential(find_function("square"), Vector{0.0}, U, gsq.graph);
    CHECK(sq.solution);
    CHECK(sq.residual == ExtReal(0.0));

    const auto gna = sample_subdiff_graph(find_function("neg_abs"), kLine, 9, GraphSource::clarke_numeric);
    const auto na = minty_subdifferential(find_function("neg_abs"), Vector{0.0}, kLine.shrunk(1.0, 9), gna.graph);
    CHECK_FALSE(na.solution);
    REQUIRE(na.witness.covector);
    CHECK(na.residual.raw() == doctest::Approx(1.5));  // y = 1.5, y* = -1

    const auto gab = sample_subdiff_graph(find_function("abs"), kLine, 65, GraphSource::exact);
    CHECK(minty_subdifferential(find_function("abs"), Vector{0.0}, U, gab.graph).solution);

    const Region far = Region::box(Vector{5.0}, Vector{6.0});
    CHECK_THROWS_AS(minty_subdifferential(find_function("abs"), Vector{5.5}, far, gab.graph), SampleError);
}

TEST_CASE("xbar never witnesses a failure and enlarging C never helps") {
    for (const auto& f : test_library()) {
        if (f.dim != 1) continue;
        const Region C = default_region(f);
        const Region small = C.shrunk(2.0, 17);
        for (const Vector& xbar : sample_region(small, 9)) {
            if (f(xbar).is_infinite()) continue;
            const auto in_small = iar_check(f, xbar, small, 17);
            const auto in_big = iar_check(f, xbar, C, 17);
            CHECK(in_small.residual <= in_big.residual);
            if (!in_big.solution) CHECK_FALSE(*in_big.witness.point == xbar);
            const auto sd = minty_subderivative(f, xbar, C, 17);
            if (!sd.solution) CHECK_FALSE(*sd.witness.point == xbar);
            CHECK(sd.residual >= ExtReal(0.0));
        }
    }
}

TEST_CASE("classification of two verdicts") {
    CHECK(classify(true, 0.0, true, -1.0, 1e-3) == Agreement::agree);
    CHECK(classify(false, 2.0, false, 0.5, 1e-3) == Agreement::agree);
    CHECK(classify(true, 0.0, false, 5e-4, 1e-3) == Agreement::indeterminate);
    CHECK(classify(false, 5e-4, true, 0.0, 1e-3) == Agreement::indeterminate);
    CHECK(classify(true, 0.0, false, 0.2, 1e-3) == Agreement::disagree);
    CHECK(std::string(to_string(Agreement::indeterminate)) == "indeterminate");
    CHECK(refined(65, 4) == 257);
    CHECK(refined(17, 1) == 17);
}

TEST_CASE("cross validation: solution sets of library functions") {
    CrossValidationParams p;
    p.resolution = 33;
    for (const char* id : {"square", "abs"}) {
        const auto rep = cross_validate(find_function(id), kLine, p);
        CHECK(rep.rows.size() == 33);
        CHECK(rep.count_prop1(Agreement::disagree) == 0);
        CHECK(rep.count_thm2(Agreement::disagree) == 0);
        CHECK(rep.thm2_rows() == 31);
        for (const auto& r : rep.rows) {
            const bool at_min = r.xbar[0] == 0.0;
            CAPTURE(id);
            CAPTURE(r.xbar);
            CHECK(r.iar_closed.solution == at_min);
            CHECK(r.subderivative.solution == at_min);
            if (r.subdifferential) CHECK(r.subdifferential->solution == at_min);
        }
    }
    const auto na = cross_validate(find_function("neg_abs"), kLine, p);
    for (const auto& r : na.rows) {
        CHECK_FALSE(r.iar_closed.solution);
        CHECK_FALSE(r.subderivative.solution);
        if (r.subdifferential) CHECK_FALSE(r.subdifferential->solution);
    }
    const auto relu = cross_validate(find_function("relu"), kLine, p);
    for (const auto& r : relu.rows) CHECK(r.iar_closed.solution == (r.xbar[0] <= 0.0));
    const auto ind = cross_validate(find_function("ind_halfline"), kLine, p);
    CHECK(ind.rows.size() == 17);
    for (const auto& r : ind.rows) CHECK(r.iar_closed.solution);
    CHECK(ind.graph_truncated);
}

TEST_CASE("cross validation in two dimensions") {
    CrossValidationParams p;
    p.resolution = 9;
    const auto rep = cross_validate(find_function("norm2d"), Region::box(Vector{-2.0, -2.0}, Vector{2.0, 2.0}), p);
    CHECK(rep.rows.size() == 81);
    CHECK(rep.thm2_rows() == 49);
    CHECK(rep.count_prop1(Agreement::disagree) == 0);
    CHECK(rep.count_thm2(Agreement::disagree) == 0);
    for (const auto& r : rep.rows) CHECK(r.iar_closed.solution == (r.xbar.norm() == 0.0));
}
