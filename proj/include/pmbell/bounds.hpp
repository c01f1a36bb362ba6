#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pmbell/model.hpp"

namespace pmbell {

// Context-independent outcome per Alice observable, indexed by kAllObs order.
struct NchvAssignment {
    std::array<int, 9> outcomes{+1, +1, +1, +1, +1, +1, +1, +1, +1};
    int outcome(Obs o) const { return outcomes[static_cast<std::size_t>(o)]; }
};

// One local deterministic strategy: Alice answers each announced sequence
// with a full triple (her responses may depend on the whole sequence), Bob
// answers each of his 7 settings independently of Alice's choice.
struct DeterministicStrategy {
    std::array<std::array<int, 3>, 6> alice;  // [sequence][position-1]
    std::array<int, 7> bob;                   // indexed by kBobSettings order
};

int evaluate_nchv_chi(const NchvAssignment& assignment);
int evaluate_strategy(const DeterministicStrategy& strategy, SignMode mode);

struct BoundReport {
    std::string model_class;  // "nchv-chi" | "lhv-omega" | "noncontextual-local-omega"
    std::optional<SignMode> mode;
    bool past_only = false;
    long long maximum = 0;          // exact integer arithmetic throughout
    long long maximizer_count = 0;
    long long strategy_space = 0;   // implicit size of the swept class
    long long evaluations = 0;      // explicit evaluations performed
    std::optional<NchvAssignment> nchv_witness;
    std::optional<DeterministicStrategy> strategy_witness;
    // Re-evaluating the witness must reproduce `maximum` exactly.
};

// Max of the chi expression over all 512 context-independent assignments.
BoundReport enumerate_nchv_chi();

// Max of chi + S over all 2^7 * 8^6 deterministic strategies, via the
// per-sequence decomposition: for each Bob assignment, a sequence's chi term
// plus its two S terms depend only on that sequence's own triple, so each
// sequence is maximized independently. `past_only` additionally forces equal
// first-position outcomes for the sequence pairs sharing a first observable
// (c in c.b.a / c.gamma.C, beta in beta.gamma.alpha / beta.b.B).
BoundReport enumerate_lhv_omega(SignMode mode, bool past_only = false);

// Max of chi + S (fixed-sign) over noncontextual Alice assignments combined
// with local Bob assignments (512 x 128 explicit sweep).
BoundReport noncontextual_local_omega();

// Same sweep with Bob pinned to a fixed assignment (regression helper).
BoundReport noncontextual_local_omega_with_bob(const std::array<int, 7>& bob);

}  // namespace pmbell
