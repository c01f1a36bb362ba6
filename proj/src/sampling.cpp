#include "pmbell/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pmbell {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// 53-bit uniform in [0,1); engine output is fully specified by the standard,
// so sampled counts are reproducible across platforms.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

struct RawCorrelator {
    long long signed_sum = 0;
    long long shots = 0;
};

// Sum of outcome products over the counts, walking entries in the canonical
// order they were emitted in.
RawCorrelator raw_correlator(const SampledRun& run, std::span<const int> positions) {
    if (run.counts.shots_recorded <= 0)
        throw std::invalid_argument("estimate: no recorded shots for plan " + run.plan.id());
    bool has_bob = run.plan.bob_setting.has_value();
    std::size_t expected = has_bob ? 16 : 8;
    if (run.counts.counts.size() != expected)
        throw std::invalid_argument("estimate: counts size mismatch for plan " + run.plan.id());
    RawCorrelator raw;
    raw.shots = run.counts.shots_recorded;
    std::size_t idx = 0;
    for (int m1 : {+1, -1})
        for (int m2 : {+1, -1})
            for (int m3 : {+1, -1})
                for (int mb_index = 0; mb_index < (has_bob ? 2 : 1); ++mb_index) {
                    std::array<int, 4> outc = {m1, m2, m3, mb_index == 0 ? +1 : -1};
                    int prod = 1;
                    for (int pos : positions) {
                        if (pos == kBobPosition) {
                            if (!has_bob)
                                throw std::invalid_argument(
                                    "estimate: Bob position requested without Bob setting");
                            prod *= outc[3];
                        } else {
                            prod *= outc[static_cast<std::size_t>(pos - 1)];
                        }
                    }
                    raw.signed_sum += prod * run.counts.counts[idx++];
                }
    return raw;
}

EstimateWithError to_estimate(const RawCorrelator& raw) {
    EstimateWithError est;
    est.shots = raw.shots;
    est.value = double(raw.signed_sum) / double(raw.shots);
    double variance = std::max(0.0, 1.0 - est.value * est.value);
    est.standard_error = std::sqrt(variance / double(raw.shots));
    return est;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view plan_id) {
    return splitmix64(master_seed ^ splitmix64(fnv1a64(plan_id)));
}

CountsTable sample_counts(const JointDistribution& dist, long long shots,
                          std::uint64_t master_seed, double detection_efficiency) {
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
        throw std::invalid_argument("sample_counts: detection efficiency must be in (0,1]");

    CountsTable table;
    table.plan_id = dist.plan.id();
    table.shots_emitted = shots;
    table.stream_seed = derive_stream_seed(master_seed, table.plan_id);
    table.counts.assign(dist.entries.size(), 0);

    std::vector<double> cumulative(dist.entries.size());
    double total = 0.0;
    for (std::size_t k = 0; k < dist.entries.size(); ++k) {
        total += std::max(dist.entries[k].probability, 0.0);
        cumulative[k] = total;
    }
    if (total <= 0.0) throw std::invalid_argument("sample_counts: distribution has zero mass");
    for (double& c : cumulative) c /= total;

    std::mt19937_64 rng(table.stream_seed);
    for (long long shot = 0; shot < shots; ++shot) {
        if (detection_efficiency < 1.0 && uniform01(rng) >= detection_efficiency) continue;
        double u = uniform01(rng);
        std::size_t k = std::size_t(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                    cumulative.begin());
        if (k >= table.counts.size()) k = table.counts.size() - 1;
        ++table.counts[k];
        ++table.shots_recorded;
    }
    return table;
}

SampledRun sample_plan(const NoiseModel& model, const MeasurementPlan& plan, long long shots,
                       std::uint64_t master_seed) {
    JointDistribution dist =
        run_plan(apply_noise(model), plan,
                 measurement_visibility_channel(model.per_measurement_visibility));
    return {plan, sample_counts(dist, shots, master_seed, model.detection_efficiency)};
}

std::vector<MeasurementPlan> standard_plan_set(bool chi_from_marginals) {
    std::vector<MeasurementPlan> plans;
    for (const RemoteTerm& term : remote_term_table())
        plans.push_back({term.sequence_index, term.observable});
    if (!chi_from_marginals)
        for (int seq = 0; seq < 6; ++seq) plans.push_back({seq, std::nullopt});
    return plans;
}

EstimateReport estimate(const std::vector<SampledRun>& runs, const EstimateOptions& options) {
    EstimateReport report;
    report.mode = options.mode;
    report.disjoint_configs = !options.chi_from_marginals;

    auto find_run = [&](int seq, std::optional<Obs> bob) -> const SampledRun* {
        for (const auto& run : runs)
            if (run.plan.sequence_index == seq && run.plan.bob_setting == bob) return &run;
        return nullptr;
    };

    // Remote terms from their tagged configurations.
    const auto& terms = remote_term_table();
    double s_total = 0.0, s_var = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const RemoteTerm& term = terms[k];
        const SampledRun* run = find_run(term.sequence_index, term.observable);
        if (!run)
            throw std::invalid_argument("estimate: missing configuration " +
                                        MeasurementPlan{term.sequence_index, term.observable}.id());
        std::array<int, 2> positions = {term.position, kBobPosition};
        EstimateWithError est = to_estimate(raw_correlator(*run, positions));
        if (options.mode == SignMode::Absolute) {
            est.biased_near_zero = std::abs(est.value) < 3.0 * est.standard_error;
            s_total += std::abs(est.value);
        } else {
            s_total += term.fixed_sign * est.value;
        }
        s_var += est.standard_error * est.standard_error;
        report.s_terms[k] = est;
    }
    report.s.value = s_total;
    report.s.standard_error = std::sqrt(s_var);

    // Chi terms from dedicated runs or by marginalizing Bob out of tagged runs.
    double chi_total = 0.0, chi_var = 0.0;
    std::array<int, 3> alice_positions = {1, 2, 3};
    for (int seq = 0; seq < 6; ++seq) {
        EstimateWithError est;
        if (!options.chi_from_marginals) {
            const SampledRun* run = find_run(seq, std::nullopt);
            if (!run)
                throw std::invalid_argument("estimate: missing configuration " +
                                            MeasurementPlan{seq, std::nullopt}.id());
            est = to_estimate(raw_correlator(*run, alice_positions));
        } else {
            // Pool the sequence's two tagged runs, weighted by recorded shots.
            RawCorrelator pooled;
            for (const RemoteTerm& term : terms) {
                if (term.sequence_index != seq) continue;
                const SampledRun* run = find_run(seq, term.observable);
                if (!run)
                    throw std::invalid_argument("estimate: missing configuration " +
                                                MeasurementPlan{seq, term.observable}.id());
                RawCorrelator part = raw_correlator(*run, alice_positions);
                pooled.signed_sum += part.signed_sum;
                pooled.shots += part.shots;
            }
            est = to_estimate(pooled);
        }
        report.chi_terms[static_cast<std::size_t>(seq)] = est;
        chi_total += sequence_at(seq).chi_sign * est.value;
        chi_var += est.standard_error * est.standard_error;
    }
    report.chi.value = chi_total;
    report.chi.standard_error = std::sqrt(chi_var);

    report.omega.value = report.chi.value + report.s.value;
    report.omega.standard_error = std::sqrt(chi_var + s_var);
    long long total_shots = 0;
    for (const auto& run : runs) total_shots += run.counts.shots_recorded;
    report.chi.shots = report.s.shots = report.omega.shots = total_shots;
    return report;
}

}  // namespace pmbell
