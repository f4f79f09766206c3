#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gaugedyn {

/// One invariant of a module suite with the measured value behind the verdict.
struct CheckLine {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Suite names accepted by run_suite besides "all".
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs one suite ("all" runs every suite in order). A check that throws is reported as a
/// failed line carrying the exception message. Throws PreconditionError for an unknown suite.
[[nodiscard]] std::vector<CheckLine> run_suite(std::string_view suite, unsigned threads = 1);

/// "PASS suite: name: detail" or "FAIL ...", one line per check.
void print_checks(std::ostream& out, const std::vector<CheckLine>& lines);

[[nodiscard]] bool all_pass(const std::vector<CheckLine>& lines) noexcept;

}  // namespace gaugedyn
