#ifndef VARPOLAR_RAYS_HPP
#define VARPOLAR_RAYS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "varpolar/extreal.hpp"
#include "varpolar/vector.hpp"

namespace varpolar {

struct RayScan {
    double residual = 0.0;  // max of g(y + t(center - y)) - g(y); +inf possible
    std::optional<Vector> y;
    std::optional<double> t;
};

// Increase-along-rays scan of g toward `center`: the largest increase
// g(y + t(center - y)) - g(y) over base points y with g(y) finite and t in
// `ts`. The t = 0 term makes the residual nonnegative.
RayScan scan_rays(const std::function<ExtReal(const Vector&)>& g, const Vector& center, const std::vector<Vector>& ys,
                  const std::vector<double>& ts);

}  // namespace varpolar

#endif
