#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dsos/engine/run.hpp"

namespace dsos::engine {

struct CheckVerdict {
    bool pass = true;
    std::size_t checked = 0;
    /// Trace position of the first disagreement.
    std::optional<std::size_t> witness_step;
    std::string detail;
};

/// Runs `program` under `base` and under `base` extended with a fresh
/// read-write index, with the same seed and schedule, and compares the
/// two computations entry by entry. `mutate` swaps in a rule pack that
/// writes the fresh index (negative control).
CheckVerdict modularity_check(std::shared_ptr<const Language> base, const Term& program,
                              const std::string& fresh_index, const UpgradeSchedule& schedule = {},
                              std::uint64_t seed = 0, bool mutate = false);

/// Runs a sequential program under the modular interpreter (first
/// scheduler) and under the single-heap oracle, comparing the term and
/// the union of S, F and R after every transition. Only immediate
/// injections are supported.
CheckVerdict heap_conformance(const Term& program, const UpgradeSchedule& schedule = {},
                              bool consume_all = false, std::size_t fuel = 100000);

/// Every invoke appended once and consumed at most once; every completion
/// produced by exactly one return and consumed at most once.
CheckVerdict audit_messages(const Trace& trace);

/// Future numbers handed out by calls are pairwise distinct.
CheckVerdict audit_futures(const Trace& trace);

/// Upgrade numbers never decrease.
CheckVerdict audit_upgrade_numbers(const Trace& trace);

/// Consecutive step labels compose against the recorded snapshots and
/// every jump target equals the registry's endofunctor on its source.
CheckVerdict audit_chain(const Language& lang, const Trace& trace);

/// Entries for objects other than the actor leave their local state alone.
CheckVerdict audit_frame(const Trace& trace);

}  // namespace dsos::engine
