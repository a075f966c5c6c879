#pragma once

// The verification suite: every numbered acceptance check with its pinned
// tolerance, runnable from the CLI (`verify` subcommand) or the acceptance
// test binary. Checks 1-8 measure numeric quantities; check 9 reruns the
// suite on one and on several worker threads and demands byte-identical
// numeric payloads.

#include <cstdint>
#include <string>
#include <vector>

namespace zarc::cli {

struct VerifyOptions {
    std::uint64_t seed = 1;
    int threads = 4;          // the "N threads" side of the determinism check
    bool corrupt_bessel = false; // test hook: perturb K0 to prove suite sensitivity
    int only_criterion = 0;   // 0 = all; otherwise run a single criterion (1-9)
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;      // measured values, human readable
    double runtime_sec = 0.0;
    double runtime_limit_sec = 0.0;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;
    bool all_passed = false;
    std::string numeric_payload; // deterministic JSON of all measured numbers
};

VerifyReport verify_all(const VerifyOptions& options = {});

// One line per criterion, e.g. "criterion 3 [model constant convergence]: FAIL (...)".
std::string format_table(const VerifyReport& report);

} // namespace zarc::cli
