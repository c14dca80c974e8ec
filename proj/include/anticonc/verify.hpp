#pragma once

#include "anticonc/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anticonc {

struct VerifyOptions {
    RngSeed seed{0};
    std::size_t threads = 1;         // instances processed concurrently
    std::size_t chain_points = 4000; // grid size for the pointwise chain
    std::size_t lcd_scan_points = 200'000;  // cap on the oracle scan below D_lower
    std::size_t budget = kDefaultExactBudget;
};

enum class CheckStatus { pass, fail, skip };

struct CheckOutcome {
    std::string instance;
    std::string check;
    CheckStatus status = CheckStatus::pass;
    std::string detail;  // compact JSON: the counterexample on failure, the reason on skip
};

struct VerifyReport {
    std::size_t instances = 0;
    std::vector<CheckOutcome> checks;  // instance order, then check order

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const CheckOutcome* first_failure() const;
    /// Deterministic JSON document (no timings).
    [[nodiscard]] std::string to_json(RngSeed seed) const;
};

/// Runs, per instance: regularity of Q, the pointwise chain, the functional
/// orderings lambda >= p and M >= p, projection monotonicity (d >= 2), witness
/// consistency of the progression searches (d = 1), the LCD oracle, the
/// expected values the instance pins down, and the Monte Carlo lemma-chain
/// comparison Q(H^lambda) <= Q(H^p) + 4 joint stderr.
[[nodiscard]] VerifyReport run_verify(const std::vector<InstanceSpec>& instances, const VerifyOptions& options);

/// Checks for one instance; `seed` is already the per-instance stream.
[[nodiscard]] std::vector<CheckOutcome> verify_instance(const InstanceSpec& spec, RngSeed seed,
                                                        const VerifyOptions& options);

/// ANTICONC_THREADS when set to a positive integer, otherwise 1.
[[nodiscard]] std::size_t threads_from_env();

}  // namespace anticonc
