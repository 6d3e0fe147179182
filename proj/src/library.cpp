#include "varpolar/library.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varpolar {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// One-sided derivative of |x - c| at x in direction d.
double abs_dir(double x, double c, double d) { return x != c ? sign(x - c) * d : std::abs(d); }

const ExtReal kInf = ExtReal::infinity();

FunctionOracle make_abs() {
    FunctionOracle f;
    f.id = "abs";
    f.dim = 1;
    f.meta = {true, "R"};
    f.eval = [](const Vector& x) { return ExtReal(std::abs(x[0])); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) { return ExtReal(abs_dir(x[0], 0.0, d[0])); };
    f.exact_subdifferential = [](const Vector& x) {
        if (x[0] == 0.0) return CovectorSet::interval(-1.0, 1.0);
        return CovectorSet::singleton(Vector{sign(x[0])});
    };
    return f;
}

FunctionOracle make_square() {
    FunctionOracle f;
    f.id = "square";
    f.dim = 1;
    f.meta = {true, "R"};
    f.eval = [](const Vector& x) { return ExtReal(x[0] * x[0]); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) { return ExtReal(2.0 * x[0] * d[0]); };
    f.exact_subdifferential = [](const Vector& x) { return CovectorSet::singleton(Vector{2.0 * x[0]}); };
    return f;
}

FunctionOracle make_neg_abs() {
    FunctionOracle f;
    f.id = "neg_abs";
    f.dim = 1;
    f.meta = {false, "R"};
    f.eval = [](const Vector& x) { return ExtReal(-std::abs(x[0])); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) { return ExtReal(-abs_dir(x[0], 0.0, d[0])); };
    return f;
}

FunctionOracle make_ind_halfline() {
    FunctionOracle f;
    f.id = "ind_halfline";
    f.dim = 1;
    f.meta = {true, "[0, +inf)"};
    f.eval = [](const Vector& x) { return x[0] >= 0.0 ? ExtReal(0.0) : kInf; };
    f.exact_subderivative = [](const Vector& x, const Vector& d) {
        if (x[0] > 0.0 || d[0] >= 0.0) return ExtReal(0.0);
        return kInf;
    };
    f.exact_subdifferential = [](const Vector& x) {
        if (x[0] > 0.0) return CovectorSet::interval(0.0, 0.0);
        if (x[0] == 0.0) return CovectorSet::interval(-std::numeric_limits<double>::infinity(), 0.0);
        return CovectorSet::empty(1);
    };
    return f;
}

FunctionOracle make_ind_origin() {
    FunctionOracle f;
    f.id = "ind_origin";
    f.dim = 1;
    f.meta = {true, "{0}"};
    f.eval = [](const Vector& x) { return x[0] == 0.0 ? ExtReal(0.0) : kInf; };
    f.exact_subderivative = [](const Vector&, const Vector& d) { return d[0] == 0.0 ? ExtReal(0.0) : kInf; };
    f.exact_subdifferential = [](const Vector& x) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (x[0] == 0.0) return CovectorSet::interval(-inf, inf);
        return CovectorSet::empty(1);
    };
    return f;
}

FunctionOracle make_relu() {
    FunctionOracle f;
    f.id = "relu";
    f.dim = 1;
    f.meta = {true, "R"};
    f.eval = [](const Vector& x) { return ExtReal(std::max(x[0], 0.0)); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) {
        if (x[0] > 0.0) return ExtReal(d[0]);
        if (x[0] < 0.0) return ExtReal(0.0);
        return ExtReal(std::max(d[0], 0.0));
    };
    f.exact_subdifferential = [](const Vector& x) {
        if (x[0] > 0.0) return CovectorSet::interval(1.0, 1.0);
        if (x[0] < 0.0) return CovectorSet::interval(0.0, 0.0);
        return CovectorSet::interval(0.0, 1.0);
    };
    return f;
}

FunctionOracle make_twowell() {
    FunctionOracle f;
    f.id = "twowell";
    f.dim = 1;
    f.meta = {false, "R"};
    f.eval = [](const Vector& x) { return ExtReal(std::min(std::abs(x[0]), std::abs(x[0] - 2.0) + 1.0)); };
    f.exact_subderivative = [](const Vector& xv, const Vector& d) {
        const double x = xv[0];
        const double left = std::abs(x), right = std::abs(x - 2.0) + 1.0;
        const double dl = abs_dir(x, 0.0, d[0]), dr = abs_dir(x, 2.0, d[0]);
        if (left < right) return ExtReal(dl);
        if (right < left) return ExtReal(dr);
        return ExtReal(std::min(dl, dr));
    };
    return f;
}

FunctionOracle make_norm2d() {
    FunctionOracle f;
    f.id = "norm2d";
    f.dim = 2;
    f.meta = {true, "R^2"};
    f.eval = [](const Vector& x) { return ExtReal(x.norm()); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) {
        const double r = x.norm();
        if (r == 0.0) return ExtReal(d.norm());
        return ExtReal(x.dot(d) / r);
    };
    f.exact_subdifferential = [](const Vector& x) {
        const double r = x.norm();
        if (r == 0.0) return CovectorSet::ball(Vector::zeros(2), 1.0);
        return CovectorSet::singleton((1.0 / r) * x);
    };
    return f;
}

FunctionOracle make_mixed2d() {
    FunctionOracle f;
    f.id = "mixed2d";
    f.dim = 2;
    f.meta = {true, "R^2"};
    f.eval = [](const Vector& x) { return ExtReal(x[0] * x[0] + std::abs(x[1])); };
    f.exact_subderivative = [](const Vector& x, const Vector& d) {
        return ExtReal(2.0 * x[0] * d[0] + abs_dir(x[1], 0.0, d[1]));
    };
    f.exact_subdifferential = [](const Vector& x) {
        const double g = 2.0 * x[0];
        if (x[1] != 0.0) return CovectorSet::singleton(Vector{g, sign(x[1])});
        return CovectorSet::segment(Vector{g, -1.0}, Vector{g, 1.0});
    };
    return f;
}

}  // namespace

const std::vector<FunctionOracle>& test_library() {
    static const std::vector<FunctionOracle> lib = {
        make_abs(),  make_square(),  make_neg_abs(), make_ind_halfline(), make_ind_origin(),
        make_relu(), make_twowell(), make_norm2d(),  make_mixed2d(),
    };
    return lib;
}

std::vector<std::string> library_ids() {
    std::vector<std::string> ids;
    for (const auto& f : test_library()) ids.push_back(f.id);
    return ids;
}

const FunctionOracle& find_function(std::string_view id) {
    for (const auto& f : test_library())
        if (f.id == id) return f;
    throw UnknownFunctionError("unknown function id '" + std::string(id) + "'");
}

Region default_region(const FunctionOracle& f) {
    if (f.id == "twowell") return Region::box(Vector{-1.0}, Vector{3.0});
    std::vector<double> lo(f.dim, -2.0), hi(f.dim, 2.0);
    return Region::box(Vector(lo), Vector(hi));
}

}  // namespace varpolar
