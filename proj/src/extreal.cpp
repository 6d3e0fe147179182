#include "varpolar/extreal.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace varpolar {

ExtReal::ExtReal(double v) : value_(v) {
    if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
    if (v == -kInf) throw std::domain_error("ExtReal: -inf is outside ]-inf, +inf]");
}

double ExtReal::value() const {
    if (is_infinite()) throw std::domain_error("ExtReal::value: value is +inf");
    return value_;
}

ExtReal operator+(ExtReal a, ExtReal b) noexcept {
    if (a.is_infinite() || b.is_infinite()) return ExtReal::infinity();
    return ExtReal(ExtReal::Raw{}, a.value_ + b.value_);
}

ExtReal operator-(ExtReal a, double b) {
    if (!std::isfinite(b)) throw std::domain_error("ExtReal: subtrahend must be finite");
    if (a.is_infinite()) return a;
    return ExtReal(a.value_ - b);
}

ExtReal ExtReal::scaled(double positive) const {
    if (!(positive > 0.0) || !std::isfinite(positive))
        throw std::domain_error("ExtReal::scaled: factor must be finite and > 0");
    if (is_infinite()) return *this;
    return ExtReal(value_ * positive);
}

std::string ExtReal::to_string() const {
    if (is_infinite()) return "+inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, ExtReal v) {
    if (v.is_infinite()) return os << "+inf";
    return os << v.raw();
}

}  // namespace varpolar
