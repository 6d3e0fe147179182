#ifndef VARPOLAR_GRAPH_HPP
#define VARPOLAR_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "varpolar/extreal.hpp"
#include "varpolar/vector.hpp"

namespace varpolar {

inline constexpr double kDefaultTol = 1e-6;

struct GraphPair {
    Vector point;
    Vector covector;

    friend bool operator==(const GraphPair&, const GraphPair&) = default;
};

// A finite sample of a set-valued operator T subset of R^n x R^n.
// Insertion order is kept; duplicate pairs are dropped.
class GraphSample {
public:
    explicit GraphSample(std::size_t dim);
    GraphSample(std::size_t dim, const std::vector<GraphPair>& pairs);

    // Returns false when the pair was already present.
    bool add(GraphPair pair);
    bool add(Vector point, Vector covector) { return add(GraphPair{std::move(point), std::move(covector)}); }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return pairs_.size(); }
    [[nodiscard]] bool empty() const noexcept { return pairs_.empty(); }
    [[nodiscard]] const std::vector<GraphPair>& pairs() const noexcept { return pairs_; }
    [[nodiscard]] auto begin() const noexcept { return pairs_.begin(); }
    [[nodiscard]] auto end() const noexcept { return pairs_.end(); }

    [[nodiscard]] bool contains(const GraphPair& p) const;
    // Every pair of this sample also belongs to `other`.
    [[nodiscard]] bool is_subset_of(const GraphSample& other) const;

private:
    std::size_t dim_;
    std::vector<GraphPair> pairs_;
    std::set<std::vector<double>> keys_;
};

// max(|dx|, |dx*|)
double graph_distance(const GraphPair& a, const GraphPair& b);

// Boolean outcome with the residual that decided it and whatever witness
// explains a failure.
struct Witness {
    std::optional<Vector> point;
    std::optional<Vector> covector;
    std::optional<double> parameter;
    std::optional<Vector> other_point;     // second pair of a violating couple
    std::optional<Vector> other_covector;

    [[nodiscard]] bool empty() const noexcept { return !point && !covector && !parameter; }
};

struct Verdict {
    bool holds = true;
    double residual = 0.0;  // may be +/-inf
    Witness witness;
    std::string note;
};

// CSV table "x_1..x_n,xstar_1..xstar_n", one row per pair.
void write_graph_csv(std::ostream& os, const GraphSample& g);
GraphSample read_graph_csv(std::istream& is);

}  // namespace varpolar

#endif
