#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pcns {

/// Outcome of one acceptance criterion.
struct CriterionResult {
    std::string id;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    /// Where the benchmark suite writes its CSV output; nothing is written when empty.
    std::optional<std::filesystem::path> output_dir;
    /// Progress messages, or none.
    std::ostream* log = nullptr;
};

/// identities, h_function, toy, schedule, littlewood_paley, freq_split,
/// convergence, collapse, benchmark.
std::vector<std::string> suite_names();

/// Runs one suite, or every suite for "all". Throws InputError for an unknown name.
std::vector<CriterionResult> run_suite(const std::string& name, const VerifyOptions& opt = {});

/// "PASS <id>: <detail> [<seconds>s]".
std::string format_result(const CriterionResult& r);

} // namespace pcns
