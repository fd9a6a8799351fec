#pragma once

#include "gibbs/operator.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs::cli {

enum class VerifyLevel { Fast, Full };

VerifyLevel parse_verify_level(const std::string& text);

// Replacement implementations for mutation testing. An empty function means
// the library routine is used.
struct VerifyHooks {
    std::function<double(const Operator&, const Operator&)> bs_entropy;
};

struct InvariantOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<InvariantOutcome> outcomes;

    bool passed() const;
    const InvariantOutcome* first_failure() const;
};

// Runs every invariant (fast: chains of at most 6 sites; full: up to 10) and
// streams one PASS/FAIL line per invariant to `log` when given.
VerifyReport run_verify(VerifyLevel level, const VerifyHooks& hooks = {}, std::ostream* log = nullptr);

}  // namespace gibbs::cli
