#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gaugedyn/geometry.hpp"

namespace gaugedyn::cli {

enum class Command { Phi, Gauge, Escape, Tract, Ml, Measure, Thresholds, Verify };

enum class Family { Exp, Ml };

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

struct RunConfig {
    Command command = Command::Verify;

    Family family = Family::Exp;
    double lambda = 0.1;
    double rho = 2.0;
    double gamma = 1.0;

    std::vector<double> xs;  // phi
    std::vector<double> ts;  // gauge
    std::vector<cplx> zs;    // ml

    std::optional<Rect> bbox;      // family default when absent
    std::optional<std::size_t> res;  // res x res grid; escape/tract default 512, measure the coarsest admissible
    std::size_t iters = 100;
    double bailout = 1e10;

    std::size_t scales = 8;
    double top_scale = 0.125;

    double c3 = 0.01;
    double M = 2.0;
    std::size_t N0 = 16;
    double eps = 0.0;

    std::string suite = "all";
    std::string out;         // empty: CSV to stdout; required for PGM
    std::string format;      // "csv" or "pgm"; from the --out extension when empty
    unsigned threads = 1;
};

/// Checks every numeric field against the target module's preconditions.
/// Throws PreconditionError naming the first violated one.
void validate(const RunConfig& config);

/// Dispatches one command. 0 on success, 1 on a domain or precondition error, 2 on an I/O
/// error; messages go to `err`. Files are written atomically.
[[nodiscard]] int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses flags into a RunConfig and runs it. Usage errors exit 1, --help exits 0.
/// The default thread count comes from GAUGEDYN_THREADS or the hardware.
[[nodiscard]] int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaugedyn::cli
