#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gaugedyn/geometry.hpp"
#include "gaugedyn/grid.hpp"
#include "gaugedyn/linearizer.hpp"
#include "gaugedyn/mittag.hpp"

namespace gaugedyn {

/// E_lambda or f_{a,rho}, with the attracting fixed point used for Bounded classification.
struct FamilyMember {
    enum class Kind { Exponential, ScaledMittagLeffler };

    Kind kind = Kind::Exponential;
    std::variant<ExpParams, MLParams> params;
    std::string id;
    cplx attractor{0.0, 0.0};

    [[nodiscard]] const ExpParams& exp() const { return std::get<ExpParams>(params); }
    [[nodiscard]] const MLParams& ml() const { return std::get<MLParams>(params); }
};

[[nodiscard]] FamilyMember make_exponential(double lambda);
[[nodiscard]] FamilyMember make_exponential(const ExpParams& params);
[[nodiscard]] FamilyMember make_mittag_leffler(double rho, const MLOptions& options = {});
[[nodiscard]] FamilyMember make_mittag_leffler(MLParams params);

/// f(z); may overflow to inf.
[[nodiscard]] cplx eval(const FamilyMember& f, cplx z);
/// log f(z), finite wherever the value overflows.
[[nodiscard]] cplx log_eval(const FamilyMember& f, cplx z);
/// log f(exp(w)) without forming exp(w).
[[nodiscard]] cplx log_eval_at_log(const FamilyMember& f, cplx w);

struct Orbit {
    std::vector<cplx> points;
    bool escaped = false;
    std::optional<std::size_t> escape_index;  // index of the first point past the bailout (or of the overflow)
};

inline constexpr double kDefaultBailout = 1e10;

/// Iterates until |z| > bailout or n_max steps. An iterate whose log-modulus exceeds the
/// double range, or that is not finite, ends the orbit as escaped without being stored.
[[nodiscard]] Orbit iterate(const FamilyMember& f, cplx z0, std::size_t n_max, double bailout = kDefaultBailout);

enum class Classification { Escaping, Bounded, Undecided };

[[nodiscard]] const char* to_string(Classification c) noexcept;

/// Escaping: bailout exceeded with strictly growing modulus over the last three recorded
/// steps (fewer if the orbit is shorter). Bounded: the orbit comes within 1e-6 of the
/// family's attracting fixed point. Undecided otherwise.
[[nodiscard]] Classification classify(const FamilyMember& f, cplx z0, std::size_t n_max,
                                      double bailout = kDefaultBailout);

/// Escaping cells (classification of each cell center) on an nx-by-ny grid over bbox,
/// parallel over rows. Throws PreconditionError for an empty grid or invalid bbox.
[[nodiscard]] BoolGrid escape_scan(const FamilyMember& f, const Rect& bbox, std::size_t nx, std::size_t ny,
                                   std::size_t n_max, double bailout = kDefaultBailout, unsigned threads = 1);

/// log M(r, f) sampled at n_samples equi-angular points (theta = 0 included).
[[nodiscard]] double max_modulus(const FamilyMember& f, double r, std::size_t n_samples = 720);

struct OrderEstimate {
    std::vector<double> r_values;
    std::vector<double> loglogM;  // log(log M(r, f) - log|f(0)|) at the surviving r
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares slope of log(log M(r, f/f(0))) against log r. Normalizing by f(0) removes
/// the additive log a that otherwise swamps log M at moderate r for tiny scalings.
/// Throws PreconditionError for fewer than 4 or non-increasing r <= 1, InsufficientDataError
/// if fewer than 4 samples stay finite.
[[nodiscard]] OrderEstimate order_estimate(const FamilyMember& f, std::span<const double> r_values,
                                           std::size_t n_samples = 720);

}  // namespace gaugedyn
