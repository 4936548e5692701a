// Verification suite runner: one pass/fail line per criterion, nonzero exit
// on any failure.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "orbitcert/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 12345;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    const auto results = orbitcert::run_acceptance(seed);
    bool all_pass = true;
    for (const auto& result : results) {
        all_pass = all_pass && result.pass;
        std::printf("[%s] criterion %2d: %s — %s\n", result.pass ? "PASS" : "FAIL", result.id,
                    result.name.c_str(), result.detail.c_str());
    }
    std::printf("acceptance: %s\n", all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 1;
}
