#include "varpolar/rays.hpp"

#include <limits>

namespace varpolar {

RayScan scan_rays(const std::function<ExtReal(const Vector&)>& g, const Vector& center, const std::vector<Vector>& ys,
                  const std::vector<double>& ts) {
    RayScan out;
    for (const Vector& y : ys) {
        const ExtReal gy = g(y);
        if (gy.is_infinite()) continue;
        for (double t : ts) {
            if (t == 0.0) continue;
            const ExtReal gz = g(lerp(y, center, t));
            const double inc = gz.is_infinite() ? std::numeric_limits<double>::infinity() : gz.raw() - gy.raw();
            if (inc > out.residual) {
                out.residual = inc;
                out.y = y;
                out.t = t;
                if (gz.is_infinite()) return out;
            }
        }
    }
    return out;
}

}  // namespace varpolar
