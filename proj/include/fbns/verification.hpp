#pragma once

#include <string>
#include <vector>

#include "fbns/galerkin.hpp"

namespace fbns {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // distance from the pinned tolerance; positive room
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

// The full acceptance suite: stationary preservation, discrete energy
// identity, mode-selective dissipation, boundary bracket and relaxation,
// dense-quadrature oracle agreement, pooled mean-velocity/endpoint and
// Gronwall invariants, Galerkin self-convergence, the twin-run uniqueness
// probe, and mutation sensitivity. Tolerances are pinned in the
// implementation. A non-None `mutation` is applied to the energy and
// mode-dissipation runs (those checks are then expected to fail; this is the
// defect-injection hook the mutation-sensitivity check drives).
VerifyReport run_verification_suite(RhsMutation mutation = RhsMutation::None);

// "PASS name (margin=...) detail" / "FAIL ..." one-line rendering.
std::string format_check_line(const CheckResult& c);

} // namespace fbns
