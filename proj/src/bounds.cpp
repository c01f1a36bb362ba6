#include "pmbell/bounds.hpp"

#include <cstdlib>
#include <stdexcept>

namespace pmbell {

namespace {

NchvAssignment assignment_from_mask(int mask) {
    NchvAssignment v;
    for (int k = 0; k < 9; ++k)
        v.outcomes[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? -1 : +1;
    return v;
}

std::array<int, 7> bob_from_mask(int mask) {
    std::array<int, 7> b{};
    for (int k = 0; k < 7; ++k) b[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? -1 : +1;
    return b;
}

std::array<int, 3> triple_from_mask(int mask) {
    return {(mask & 1) ? -1 : +1, (mask & 2) ? -1 : +1, (mask & 4) ? -1 : +1};
}

// chi term plus the sequence's two S terms, for one sequence and a fixed Bob.
int sequence_objective(int seq, const std::array<int, 3>& triple, const std::array<int, 7>& bob,
                       SignMode mode) {
    const ContextSequence& s = sequence_at(seq);
    int value = s.chi_sign * triple[0] * triple[1] * triple[2];
    for (const RemoteTerm& term : remote_term_table()) {
        if (term.sequence_index != seq) continue;
        int corr = triple[static_cast<std::size_t>(term.position - 1)] *
                   bob[static_cast<std::size_t>(bob_setting_index(term.observable))];
        value += mode == SignMode::Absolute ? std::abs(corr) : term.fixed_sign * corr;
    }
    return value;
}

struct SeqBest {
    int best = -99;
    long long count = 0;
    int first_mask = 0;
};

SeqBest best_triple(int seq, const std::array<int, 7>& bob, SignMode mode,
                    std::optional<int> forced_first = std::nullopt) {
    SeqBest out;
    for (int mask = 0; mask < 8; ++mask) {
        std::array<int, 3> triple = triple_from_mask(mask);
        if (forced_first && triple[0] != *forced_first) continue;
        int value = sequence_objective(seq, triple, bob, mode);
        if (value > out.best) {
            out.best = value;
            out.count = 1;
            out.first_mask = mask;
        } else if (value == out.best) {
            ++out.count;
        }
    }
    return out;
}

}  // namespace

int evaluate_nchv_chi(const NchvAssignment& v) {
    int total = 0;
    for (const ContextSequence& seq : context_table()) {
        int prod = 1;
        for (Obs o : seq.observables) prod *= v.outcome(o);
        total += seq.chi_sign * prod;
    }
    return total;
}

int evaluate_strategy(const DeterministicStrategy& strategy, SignMode mode) {
    int total = 0;
    for (int seq = 0; seq < 6; ++seq)
        total += sequence_objective(seq, strategy.alice[static_cast<std::size_t>(seq)],
                                    strategy.bob, mode);
    return total;
}

BoundReport enumerate_nchv_chi() {
    BoundReport report;
    report.model_class = "nchv-chi";
    report.strategy_space = 512;
    report.evaluations = 512;
    report.maximum = -99;
    for (int mask = 0; mask < 512; ++mask) {
        NchvAssignment v = assignment_from_mask(mask);
        int value = evaluate_nchv_chi(v);
        if (value > report.maximum) {
            report.maximum = value;
            report.maximizer_count = 1;
            report.nchv_witness = v;
        } else if (value == report.maximum) {
            ++report.maximizer_count;
        }
    }
    return report;
}

BoundReport enumerate_lhv_omega(SignMode mode, bool past_only) {
    BoundReport report;
    report.model_class = "lhv-omega";
    report.mode = mode;
    report.past_only = past_only;
    report.strategy_space = 1LL << 25;  // 2^7 Bob assignments x (2^3)^6 Alice responses
    report.maximum = -999;

    // Sequence pairs sharing a first observable, for the past-only restriction.
    constexpr std::array<std::array<int, 2>, 2> kPrefixPairs = {{{2, 4}, {1, 5}}};
    constexpr std::array<int, 2> kFreeSequences = {0, 3};

    for (int bm = 0; bm < 128; ++bm) {
        std::array<int, 7> bob = bob_from_mask(bm);
        long long total = 0;
        long long ways = 1;
        DeterministicStrategy candidate{};
        candidate.bob = bob;

        if (!past_only) {
            for (int seq = 0; seq < 6; ++seq) {
                SeqBest sb = best_triple(seq, bob, mode);
                report.evaluations += 8;
                total += sb.best;
                ways *= sb.count;
                candidate.alice[static_cast<std::size_t>(seq)] = triple_from_mask(sb.first_mask);
            }
        } else {
            for (int seq : kFreeSequences) {
                SeqBest sb = best_triple(seq, bob, mode);
                report.evaluations += 8;
                total += sb.best;
                ways *= sb.count;
                candidate.alice[static_cast<std::size_t>(seq)] = triple_from_mask(sb.first_mask);
            }
            for (const auto& pair : kPrefixPairs) {
                int pair_best = -999;
                long long pair_ways = 0;
                std::array<std::array<int, 3>, 2> pair_witness{};
                for (int first : {+1, -1}) {
                    SeqBest s0 = best_triple(pair[0], bob, mode, first);
                    SeqBest s1 = best_triple(pair[1], bob, mode, first);
                    report.evaluations += 8;
                    int v = s0.best + s1.best;
                    if (v > pair_best) {
                        pair_best = v;
                        pair_ways = s0.count * s1.count;
                        pair_witness = {triple_from_mask(s0.first_mask),
                                        triple_from_mask(s1.first_mask)};
                    } else if (v == pair_best) {
                        pair_ways += s0.count * s1.count;
                    }
                }
                total += pair_best;
                ways *= pair_ways;
                candidate.alice[static_cast<std::size_t>(pair[0])] = pair_witness[0];
                candidate.alice[static_cast<std::size_t>(pair[1])] = pair_witness[1];
            }
        }

        if (total > report.maximum) {
            report.maximum = total;
            report.maximizer_count = ways;
            report.strategy_witness = candidate;
        } else if (total == report.maximum) {
            report.maximizer_count += ways;
        }
    }
    return report;
}

BoundReport noncontextual_local_omega() {
    BoundReport report;
    report.model_class = "noncontextual-local-omega";
    report.mode = SignMode::FixedSign;
    report.strategy_space = 512LL * 128LL;
    report.maximum = -999;
    for (int am = 0; am < 512; ++am) {
        NchvAssignment v = assignment_from_mask(am);
        int chi = evaluate_nchv_chi(v);
        for (int bm = 0; bm < 128; ++bm) {
            std::array<int, 7> bob = bob_from_mask(bm);
            int value = chi;
            for (const RemoteTerm& term : remote_term_table())
                value += term.fixed_sign * v.outcome(term.observable) *
                         bob[static_cast<std::size_t>(bob_setting_index(term.observable))];
            ++report.evaluations;
            if (value > report.maximum) {
                report.maximum = value;
                report.maximizer_count = 1;
                report.nchv_witness = v;
                DeterministicStrategy strat{};
                for (int seq = 0; seq < 6; ++seq)
                    for (int pos = 0; pos < 3; ++pos)
                        strat.alice[static_cast<std::size_t>(seq)][static_cast<std::size_t>(pos)] =
                            v.outcome(sequence_at(seq).observables[static_cast<std::size_t>(pos)]);
                strat.bob = bob;
                report.strategy_witness = strat;
            } else if (value == report.maximum) {
                ++report.maximizer_count;
            }
        }
    }
    return report;
}

BoundReport noncontextual_local_omega_with_bob(const std::array<int, 7>& bob) {
    BoundReport report;
    report.model_class = "noncontextual-local-omega(pinned-bob)";
    report.mode = SignMode::FixedSign;
    report.strategy_space = 512;
    report.maximum = -999;
    for (int am = 0; am < 512; ++am) {
        NchvAssignment v = assignment_from_mask(am);
        int value = evaluate_nchv_chi(v);
        for (const RemoteTerm& term : remote_term_table())
            value += term.fixed_sign * v.outcome(term.observable) *
                     bob[static_cast<std::size_t>(bob_setting_index(term.observable))];
        ++report.evaluations;
        if (value > report.maximum) {
            report.maximum = value;
            report.maximizer_count = 1;
            report.nchv_witness = v;
        } else if (value == report.maximum) {
            ++report.maximizer_count;
        }
    }
    return report;
}

}  // namespace pmbell
