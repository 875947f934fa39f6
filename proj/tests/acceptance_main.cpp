// Acceptance suite driver: runs every criterion at its stated scale and
// prints one pass/fail line each. Exit code 0 only when everything passes.

#include <iostream>

#include "dc1lab/acceptance.hpp"

int main() {
    dc1lab::acceptance::AcceptanceConfig cfg;
    const auto outcome = dc1lab::acceptance::run_acceptance(cfg, &std::cout);
    return outcome.all_pass ? 0 : 1;
}
