#ifndef VARPOLAR_MINTY_HPP
#define VARPOLAR_MINTY_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "varpolar/extreal.hpp"
#include "varpolar/graph.hpp"
#include "varpolar/oracle.hpp"
#include "varpolar/region.hpp"
#include "varpolar/subderivative.hpp"
#include "varpolar/subdifferential.hpp"

namespace varpolar {

// A graph sample that cannot support the requested computation.
class SampleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultTResolution = 64;
inline constexpr double kDefaultBand = 1e-3;

struct ProbeMeta {
    std::string region;
    std::size_t resolution = 0;
    std::size_t t_resolution = 0;
};

struct MintyReport {
    ExtReal residual;
    bool solution = true;
    Witness witness;  // y in witness.point; covector or t alongside
    ProbeMeta probe;
};

// f(y + t(xbar - y)) <= f(y) over the grid of C and a uniform t-grid that
// contains 0 and 1. Requires xbar in C.
MintyReport iar_check(const FunctionOracle& f, const Vector& xbar, const Region& C, std::size_t resolution,
                      std::size_t t_resolution = kDefaultTResolution, double tol = kDefaultTol);

// f'(y; xbar - y) <= 0 over the grid points of C inside dom f. The term
// y = xbar contributes exactly 0.
MintyReport minty_subderivative(const FunctionOracle& f, const Vector& xbar, const Region& C, std::size_t resolution,
                                const LiminfScheme& scheme = {}, double tol = kDefaultTol);

// <y*, xbar - y> <= 0 over the pairs of `graph` whose point lies in U.
// Throws SampleError when no pair lies in U.
MintyReport minty_subdifferential(const FunctionOracle& f, const Vector& xbar, const Region& U,
                                  const GraphSample& graph, double tol = kDefaultTol);

enum class Agreement { agree, indeterminate, disagree };

const char* to_string(Agreement a) noexcept;

// Two verdicts on the same question. When they differ, the failing side's
// residual decides: at most `band` is indeterminate, beyond it a disagreement.
Agreement classify(bool a_holds, double a_residual, bool b_holds, double b_residual, double band);

struct CrossValidationParams {
    std::size_t resolution = 65;    // grid of xbar candidates and IAR base points
    std::size_t t_resolution = kDefaultTResolution;
    std::size_t probe_refine = 4;   // Minty probes and graph run on a grid this much finer
    LiminfScheme scheme{};
    GraphSamplingParams sampling{};
    std::optional<GraphSource> source;  // defaults to preferred_source(f)
    double tol = kDefaultTol;
    double band = kDefaultBand;
};

struct EquivalenceRow {
    Vector xbar;
    bool interior = false;
    MintyReport subderivative;       // over C = region
    MintyReport iar_closed;          // over C = region
    Agreement prop1 = Agreement::agree;
    std::optional<MintyReport> subdifferential;  // over U, interior xbar only
    std::optional<MintyReport> iar_open;         // over U
    std::optional<Agreement> thm2;
};

struct EquivalenceReport {
    std::string function_id;
    std::string region;
    std::string open_region;
    CrossValidationParams params;
    bool graph_truncated = false;
    std::vector<EquivalenceRow> rows;

    [[nodiscard]] std::size_t count_prop1(Agreement a) const;
    [[nodiscard]] std::size_t count_thm2(Agreement a) const;
    [[nodiscard]] std::size_t thm2_rows() const;
};

// Runs both equivalences at every grid xbar in region intersected with dom f.
// U is the region shrunk by one grid cell, so only interior grid points
// serve as xbar for the subdifferential route.
EquivalenceReport cross_validate(const FunctionOracle& f, const Region& region, const CrossValidationParams& params = {});

// Grid refined `refine` times: (resolution - 1) * refine + 1 points per axis.
std::size_t refined(std::size_t resolution, std::size_t refine);

}  // namespace varpolar

#endif
