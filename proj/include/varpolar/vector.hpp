#ifndef VARPOLAR_VECTOR_HPP
#define VARPOLAR_VECTOR_HPP

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/container/small_vector.hpp>

namespace varpolar {

// Malformed input: mismatched dimensions, empty vectors, non-finite entries.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A point or covector of R^n with finite coordinates. Primal and dual
// spaces are both R^n, paired by the dot product.
class Vector {
public:
    using Storage = boost::container::small_vector<double, 3>;

    Vector(std::initializer_list<double> coords);
    explicit Vector(std::span<const double> coords);
    static Vector zeros(std::size_t dim);
    static Vector unit(std::size_t dim, std::size_t axis);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return coords_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return {coords_.data(), coords_.size()}; }

    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] double dot(const Vector& other) const;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s);

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(double s, Vector a) { return a *= s; }
    friend Vector operator*(Vector a, double s) { return a *= s; }
    friend Vector operator-(Vector a) { return a *= -1.0; }

    friend bool operator==(const Vector& a, const Vector& b) noexcept { return a.coords_ == b.coords_; }
    // Lexicographic; used for deterministic ordering and deduplication.
    friend bool operator<(const Vector& a, const Vector& b) noexcept { return a.coords_ < b.coords_; }

    [[nodiscard]] std::string to_string() const;

private:
    Vector() = default;
    void check_finite() const;

    Storage coords_;
};

// a + t * (b - a)
Vector lerp(const Vector& a, const Vector& b, double t);

double distance(const Vector& a, const Vector& b);

void require_same_dim(const Vector& a, const Vector& b, const char* context);

std::ostream& operator<<(std::ostream& os, const Vector& v);

}  // namespace varpolar

#endif
