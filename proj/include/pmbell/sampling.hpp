#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pmbell/noise.hpp"

namespace pmbell {

// Integer counts for one plan configuration, aligned entry-for-entry with the
// JointDistribution it was drawn from. With detection_efficiency < 1 the
// recorded shots are a Bernoulli-thinned subset of the emitted ones, so
// counts sum to shots_recorded (= shots_emitted only at efficiency 1).
struct CountsTable {
    std::string plan_id;
    long long shots_emitted = 0;
    long long shots_recorded = 0;
    std::vector<long long> counts;
    std::uint64_t stream_seed = 0;
};

// Per-configuration RNG stream derived from (master seed, plan id), so the
// order in which configurations run cannot change any result.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view plan_id);

CountsTable sample_counts(const JointDistribution& dist, long long shots,
                          std::uint64_t master_seed, double detection_efficiency);

struct EstimateWithError {
    double value = 0.0;
    double standard_error = 0.0;
    long long shots = 0;
    bool biased_near_zero = false;  // absolute-mode delta method unreliable, |m| < 3 SE
};

struct SampledRun {
    MeasurementPlan plan;
    CountsTable counts;
};

struct EstimateOptions {
    SignMode mode = SignMode::Absolute;
    // Estimate chi by marginalizing Bob out of the 12 tagged runs instead of
    // requiring 6 dedicated chi configurations.
    bool chi_from_marginals = false;
};

struct EstimateReport {
    std::array<EstimateWithError, 6> chi_terms;   // sequence correlators
    std::array<EstimateWithError, 12> s_terms;    // signed <X X'> values
    EstimateWithError chi;
    EstimateWithError s;
    EstimateWithError omega;
    SignMode mode = SignMode::Absolute;
    // True when chi and S come from disjoint configurations, in which case
    // SE(omega)^2 = SE(chi)^2 + SE(S)^2 holds exactly.
    bool disjoint_configs = true;
};

// Binomial per-term standard errors, independent-configuration quadrature for
// the totals. Throws when a required configuration is missing.
EstimateReport estimate(const std::vector<SampledRun>& runs, const EstimateOptions& options);

// Convenience: exact distribution for a plan under a noise model, then counts.
SampledRun sample_plan(const NoiseModel& model, const MeasurementPlan& plan, long long shots,
                       std::uint64_t master_seed);

// The 12 tagged configurations plus, unless chi_from_marginals, the 6 chi ones.
std::vector<MeasurementPlan> standard_plan_set(bool chi_from_marginals);

}  // namespace pmbell
