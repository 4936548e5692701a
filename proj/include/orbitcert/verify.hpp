#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbitcert {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the built-in verification suite: closed-form oracles, the index and
/// degree identities, the certificate soundness checks and the numerical
/// hygiene checks, each at its pinned tolerance. The seed drives the
/// randomized property checks.
[[nodiscard]] std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 12345);

}  // namespace orbitcert
