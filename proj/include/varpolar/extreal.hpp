#ifndef VARPOLAR_EXTREAL_HPP
#define VARPOLAR_EXTREAL_HPP

#include <compare>
#include <iosfwd>
#include <limits>
#include <string>

namespace varpolar {

// A value in ]-inf, +inf]. Functions handled by this library never take the
// value -inf, so it is rejected at construction; NaN is rejected as well.
class ExtReal {
public:
    constexpr ExtReal() noexcept = default;
    ExtReal(double v);  // NOLINT(google-explicit-constructor): reals embed implicitly

    static constexpr ExtReal infinity() noexcept { return ExtReal(Raw{}, kInf); }

    [[nodiscard]] constexpr bool is_finite() const noexcept { return value_ != kInf; }
    [[nodiscard]] constexpr bool is_infinite() const noexcept { return value_ == kInf; }

    // Underlying double; +inf maps to std::numeric_limits<double>::infinity().
    [[nodiscard]] constexpr double raw() const noexcept { return value_; }

    // Finite value; throws std::domain_error when +inf.
    [[nodiscard]] double value() const;

    friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.value_ == b.value_; }
    friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
        // Neither operand is NaN, so the partial order of doubles is total here.
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // +inf absorbs under addition.
    friend ExtReal operator+(ExtReal a, ExtReal b) noexcept;
    // a - b for a finite real b; +inf - b = +inf.
    friend ExtReal operator-(ExtReal a, double b);
    // Scaling by a strictly positive real keeps +inf fixed.
    [[nodiscard]] ExtReal scaled(double positive) const;

    [[nodiscard]] std::string to_string() const;

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    struct Raw {};
    constexpr ExtReal(Raw, double v) noexcept : value_(v) {}

    double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtReal v);

inline ExtReal min(ExtReal a, ExtReal b) noexcept { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }

}  // namespace varpolar

#endif
