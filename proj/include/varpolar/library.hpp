#ifndef VARPOLAR_LIBRARY_HPP
#define VARPOLAR_LIBRARY_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "varpolar/oracle.hpp"
#include "varpolar/region.hpp"

namespace varpolar {

class UnknownFunctionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Curated functions with exact side-oracles, addressable by stable ids:
//   abs           |x|
//   square        x^2
//   neg_abs       -|x|                      (nonconvex)
//   ind_halfline  indicator of [0, +inf)
//   ind_origin    indicator of {0}
//   relu          max(x, 0)
//   twowell       min(|x|, |x - 2| + 1)     (nonconvex, minima at 0 and 2)
//   norm2d        Euclidean norm on R^2
//   mixed2d       x1^2 + |x2|
// Every entry has an exact subderivative; convex entries also carry an exact
// subdifferential.
const std::vector<FunctionOracle>& test_library();

std::vector<std::string> library_ids();

// Throws UnknownFunctionError for ids not in the library.
const FunctionOracle& find_function(std::string_view id);

// Default verification region: [-2, 2]^n, except [-1, 3] for twowell.
Region default_region(const FunctionOracle& f);

}  // namespace varpolar

#endif
