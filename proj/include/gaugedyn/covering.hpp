#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gaugedyn/grid.hpp"
#include "gaugedyn/linearizer.hpp"

namespace gaugedyn {

/// Axis-aligned mesh of cells [origin + k s, origin + (k+1) s) in both directions.
struct Mesh {
    double cell_side = 0.0;
    cplx origin{0.0, 0.0};
    long i0 = 0, i1 = 0;  // half-open column range
    long j0 = 0, j1 = 0;  // half-open row range

    [[nodiscard]] Square cell(long i, long j) const;
};

/// One covering scale: count mesh cells of side `scale`, and the gauged sum over them.
struct CoverReport {
    double scale = 0.0;
    std::size_t count = 0;
    double gauged_sum = 0.0;
};

struct MeshCover {
    Mesh mesh;
    CoverReport report;  // gauged_sum left 0; see gauged_sum()
    std::vector<std::pair<long, long>> cells;  // row-major from the bottom row
};

/// Mesh cells holding the center of at least one set mask cell, so a mask cell counts
/// exactly once. The mesh origin defaults to the lower-left bbox corner. Throws PreconditionError if
/// cell_side < 2 * max(dx, dy).
[[nodiscard]] MeshCover mesh_cover(const BoolGrid& mask, double cell_side, unsigned threads = 1);
[[nodiscard]] MeshCover mesh_cover(const BoolGrid& mask, double cell_side, cplx origin, unsigned threads);

/// count * h(sqrt(2) * scale).
[[nodiscard]] double gauged_sum(const CoverReport& report, const GaugeSpec& spec);

struct ScalingSeries {
    std::vector<CoverReport> reports;
    double trend = 0.0;  // least-squares slope of log gauged_sum against log(1/scale)
};

/// Needs >= 4 scales, each at most half the previous one.
[[nodiscard]] ScalingSeries scaling_series(const std::function<BoolGrid(double)>& mask_at_scale, const GaugeSpec& spec,
                                           const std::vector<double>& scales, unsigned threads = 1);

[[nodiscard]] std::string cover_reports_csv(const std::vector<CoverReport>& reports);

/// R_n = min{2^k R_{n-1} : 2^k R_{n-1} >= exp(lambda R_{n-1})}, carried as log R_n and
/// the exponents k_n. Stops early (truncated = true) once lambda R_{n-1} leaves double range.
struct RSequence {
    std::vector<double> log_R;      // log R_0 .. log R_m
    std::vector<double> k;          // k[n] for n >= 1 (k[0] = 0)
    bool truncated = false;
};

/// Throws PreconditionError if R0 < 3 beta / lambda.
[[nodiscard]] RSequence R_sequence(const ExpParams& params, double R0, std::size_t n);

/// log r_{n+1} = -log(rho M) - rho c K / (M r_n), truncated once r_n underflows.
struct rSequence {
    std::vector<double> log_r;
    bool truncated = false;
};

[[nodiscard]] rSequence r_sequence(double rho, double M, double c, double K, double r0, std::size_t n);

/// Lower bound log s' = -log(rho) - rho c K / s for the side after one pullback step.
[[nodiscard]] double next_side_log(double rho, double c, double K, double s);

/// Checks, along s_{k+1} = exp(next_side_log(s_k)) from s0, that r_{n+1} <= s_k / M <= r_n
/// implies s_{k+1} / M >= r_{n+2}. Returns the number of violations among engaged pairs
/// and the number of engaged pairs.
[[nodiscard]] std::pair<std::size_t, std::size_t> interlacing_check(double rho, double M, double c, double K,
                                                                    const rSequence& r, double s0, std::size_t steps);

struct McMullenProduct {
    std::vector<double> log_P;  // log P_n, n = 1..N
    std::vector<double> P;
};

/// P_n = Phi(1/d_n)^gamma * prod_{j <= n} Delta_j for explicit diameters.
[[nodiscard]] McMullenProduct mcmullen_product(const GaugeSpec& spec, const std::vector<double>& d_seq,
                                               const std::vector<double>& delta_seq);
/// Same with d_n = 1 / E_lambda^{n-1}(x0), evaluated through Phi(E^{n-1}(x0)) without the iterate.
[[nodiscard]] McMullenProduct mcmullen_product_orbit(const GaugeSpec& spec, double x0,
                                                     const std::vector<double>& delta_seq);

/// Element of a nesting level: a square or a polygon with its parent index on the previous level.
struct NestElement {
    std::string id;
    std::string parent_id;  // empty on level 0
    std::variant<Square, Polygon> shape;

    [[nodiscard]] double diam() const;
    [[nodiscard]] Rect bounding_box() const;
    [[nodiscard]] bool contains(cplx z) const;
};

struct NestingFamily {
    std::vector<std::vector<NestElement>> levels;
    std::vector<double> d_seq;      // d_n bounds diam at level n
    std::vector<double> delta_seq;  // Delta_n bounds dens(A_{n+1}, B) for B at level n
};

/// Line format, '#' starts a comment:
///   d <level> <value>
///   delta <level> <value>
///   <level> <id> <parent_id|-> square <cx> <cy> <side> <angle>
///   <level> <id> <parent_id|-> polygon <x1> <y1> <x2> <y2> ...
/// Throws IoError on malformed lines.
[[nodiscard]] NestingFamily parse_nesting_family(const std::string& text);
[[nodiscard]] std::string format_nesting_family(const NestingFamily& family);

struct NestingReport {
    bool valid = true;
    int condition = 0;  // first violated condition (1 containment, 2 diameters, 3 densities)
    std::size_t level = 0;
    std::string element;
    std::string message;
    std::vector<double> min_density;  // per level n < last, min over B of dens(A_{n+1}, B)
};

/// Density per element by sampling `resolution`^2 points of its bounding box.
/// Density comparisons accept dens >= Delta_n - slack.
[[nodiscard]] NestingReport nesting_validate(const NestingFamily& family, std::size_t resolution = 256,
                                             double slack = 0.0);

/// Desk-scale version of the nested construction for E_lambda: Q_0 in Q_{R_0}; level-1 sets
/// are the pullbacks G(Q^) inside Q_0 of squares Q^ in Q_{R_1}. For each level n in {0, 1}
/// the measured dens(A_{n+1}, B) is compared with the chain of lower bounds
/// dens(U_{R_{n+1}}, Q^*) |Q^*| / |Q| / L(phi)^2.
struct ProbeLevel {
    std::size_t elements = 0;
    double min_measured = 0.0;
    double min_reported = 0.0;
    double min_ratio = 0.0;  // min over B of measured / reported
};

struct NestingProbe {
    double R0 = 0.0, R1 = 0.0, log_R2 = 0.0;
    double margin = 0.0;  // Q^* side = side - margin
    std::vector<ProbeLevel> levels;
};

[[nodiscard]] NestingProbe exp_nesting_probe(double lambda, std::size_t resolution = 256,
                                             std::size_t max_level1 = 48);

struct BesicovitchResult {
    std::vector<std::size_t> chosen;  // indices into the request list
    std::size_t max_overlap = 0;
};

inline constexpr std::size_t kN0Impl = 16;

/// Greedy largest-first: a request is kept iff its center lies in no kept open square.
/// max_overlap is the exact maximal multiplicity of the kept open squares, from a slab sweep
/// over the arrangement. Throws PreconditionError for non-positive sides.
[[nodiscard]] BesicovitchResult besicovitch_cover(const std::vector<std::pair<cplx, double>>& requests);

/// Maximal number of open axis-aligned squares sharing a point.
[[nodiscard]] std::size_t max_overlap(const std::vector<Square>& squares);

struct GammaThresholds {
    double lower = 0.0;  // (log rho - log c3) / log beta
    double upper = 0.0;  // (log(2 rho) - log(M^2 N0) - log(1 + eps)) / log beta
};

[[nodiscard]] GammaThresholds gamma_thresholds(double rho, double c3, double M, std::size_t N0,
                                               const ExpParams& params, double eps = 0.0);

}  // namespace gaugedyn
