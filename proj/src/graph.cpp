#include "varpolar/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace varpolar {

namespace {

std::vector<double> key_of(const GraphPair& p) {
    std::vector<double> k(p.point.coords().begin(), p.point.coords().end());
    k.insert(k.end(), p.covector.coords().begin(), p.covector.coords().end());
    return k;
}

}  // namespace

GraphSample::GraphSample(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DimensionError("GraphSample: dimension must be positive");
}

GraphSample::GraphSample(std::size_t dim, const std::vector<GraphPair>& pairs) : GraphSample(dim) {
    for (const auto& p : pairs) add(p);
}

bool GraphSample::add(GraphPair pair) {
    if (pair.point.dim() != dim_ || pair.covector.dim() != dim_)
        throw DimensionError("GraphSample::add: pair dimension does not match sample dimension");
    if (!keys_.insert(key_of(pair)).second) return false;
    pairs_.push_back(std::move(pair));
    return true;
}

bool GraphSample::contains(const GraphPair& p) const {
    if (p.point.dim() != dim_ || p.covector.dim() != dim_) return false;
    return keys_.contains(key_of(p));
}

bool GraphSample::is_subset_of(const GraphSample& other) const {
    return std::all_of(pairs_.begin(), pairs_.end(), [&](const GraphPair& p) { return other.contains(p); });
}

double graph_distance(const GraphPair& a, const GraphPair& b) {
    return std::max(distance(a.point, b.point), distance(a.covector, b.covector));
}

void write_graph_csv(std::ostream& os, const GraphSample& g) {
    const std::size_t n = g.dim();
    for (std::size_t i = 0; i < n; ++i) os << "x_" << i + 1 << ',';
    for (std::size_t i = 0; i < n; ++i) os << "xstar_" << i + 1 << (i + 1 < n ? "," : "\n");
    const auto old = os.precision(17);
    for (const auto& p : g) {
        for (std::size_t i = 0; i < n; ++i) os << p.point[i] << ',';
        for (std::size_t i = 0; i < n; ++i) os << p.covector[i] << (i + 1 < n ? "," : "\n");
    }
    os.precision(old);
}

GraphSample read_graph_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw DimensionError("read_graph_csv: missing header");
    const std::size_t cols = std::count(line.begin(), line.end(), ',') + 1;
    if (cols % 2 != 0) throw DimensionError("read_graph_csv: header must have 2n columns");
    const std::size_t n = cols / 2;
    GraphSample g(n);
    std::vector<double> vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        vals.clear();
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != cols) throw DimensionError("read_graph_csv: row has wrong column count");
        g.add(Vector(std::span<const double>(vals.data(), n)), Vector(std::span<const double>(vals.data() + n, n)));
    }
    return g;
}

}  // namespace varpolar
