#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aircomp {

struct VerifyOptions {
    bool quick = false;  // reduced scale, duality-gap tolerance relaxed to 1e-3
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string scratch_dir;  // artifacts for the determinism check; empty -> temp dir
};

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Run the acceptance suite, printing one pass/fail line per criterion.
/// Returns the per-criterion results; overall success is all-pass.
std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& opts, std::ostream& os);

}  // namespace aircomp
