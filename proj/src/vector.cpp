#include "varpolar/vector.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace varpolar {

Vector::Vector(std::initializer_list<double> coords) : coords_(coords.begin(), coords.end()) {
    check_finite();
}

Vector::Vector(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
    check_finite();
}

Vector Vector::zeros(std::size_t dim) {
    if (dim == 0) throw DimensionError("Vector: dimension must be positive");
    Vector v;
    v.coords_.assign(dim, 0.0);
    return v;
}

Vector Vector::unit(std::size_t dim, std::size_t axis) {
    Vector v = zeros(dim);
    if (axis >= dim) throw DimensionError("Vector::unit: axis out of range");
    v.coords_[axis] = 1.0;
    return v;
}

void Vector::check_finite() const {
    if (coords_.empty()) throw DimensionError("Vector: dimension must be positive");
    for (double c : coords_)
        if (!std::isfinite(c)) throw DimensionError("Vector: coordinates must be finite");
}

double Vector::norm() const noexcept {
    if (coords_.size() == 1) return std::abs(coords_[0]);
    double s = 0.0;
    for (double c : coords_) s += c * c;
    return std::sqrt(s);
}

double Vector::dot(const Vector& other) const {
    require_same_dim(*this, other, "Vector::dot");
    double s = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other.coords_[i];
    return s;
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_dim(*this, other, "Vector::operator+=");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_dim(*this, other, "Vector::operator-=");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
}

std::string Vector::to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

Vector lerp(const Vector& a, const Vector& b, double t) {
    require_same_dim(a, b, "lerp");
    Vector r = a;
    if (t == 0.0) return r;
    if (t == 1.0) return b;
    return r += t * (b - a);
}

double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

void require_same_dim(const Vector& a, const Vector& b, const char* context) {
    if (a.dim() != b.dim())
        throw DimensionError(std::string(context) + ": dimension mismatch (" + std::to_string(a.dim()) +
                             " vs " + std::to_string(b.dim()) + ")");
}

std::ostream& operator<<(std::ostream& os, const Vector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    return os << ')';
}

}  // namespace varpolar
