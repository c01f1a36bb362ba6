#include "pmbell/sequential.hpp"

#include <cmath>
#include <stdexcept>

namespace pmbell {

namespace {

Matrix apply_channel(const Channel& ch, const Matrix& rho) { return ch ? ch(rho) : rho; }

// Unsigned dephasing sum_o P_o rho P_o = (rho + O rho O)/2 for dichotomic O.
Matrix dephase(const Matrix& obs, const Matrix& rho) { return (rho + obs * rho * obs) / 2.0; }

// Signed dephasing sum_o o P_o rho P_o = {O, rho}/2.
Matrix signed_dephase(const Matrix& obs, const Matrix& rho) {
    return (obs * rho + rho * obs) / 2.0;
}

}  // namespace

std::string MeasurementPlan::id() const {
    std::string s{sequence_at(sequence_index).id};
    if (bob_setting) s += "|" + label_name({*bob_setting, Party::Bob});
    return s;
}

double JointDistribution::probability_sum() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.probability;
    return total;
}

JointDistribution run_plan(const Matrix& state, const MeasurementPlan& plan,
                           const Channel& between) {
    if (state.rows() != kStateDim || state.cols() != kStateDim)
        throw std::invalid_argument("run_plan: state must be 16-dimensional");
    const ContextSequence& seq = sequence_at(plan.sequence_index);

    JointDistribution dist;
    dist.plan = plan;
    dist.has_bob = plan.bob_setting.has_value();

    std::array<ProjectorPair, 3> alice;
    for (int k = 0; k < 3; ++k)
        alice[static_cast<std::size_t>(k)] =
            dichotomic_projectors(alice_observable(seq.observables[static_cast<std::size_t>(k)]));

    // Branch states are carried unnormalized; a leaf's probability is its trace.
    struct Branch {
        Matrix sigma;
        std::array<int, 3> alice{0, 0, 0};
        int bob = 0;
    };
    std::vector<Branch> branches;
    if (dist.has_bob) {
        ProjectorPair q = dichotomic_projectors(bob_observable(*plan.bob_setting));
        branches.push_back({q.plus * state * q.plus, {0, 0, 0}, +1});
        branches.push_back({q.minus * state * q.minus, {0, 0, 0}, -1});
    } else {
        branches.push_back({state, {0, 0, 0}, 0});
    }
    for (int k = 0; k < 3; ++k) {
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        for (auto& br : branches) {
            Matrix sigma = k >= 1 ? apply_channel(between, br.sigma) : std::move(br.sigma);
            const auto& pp = alice[static_cast<std::size_t>(k)];
            for (int o : {+1, -1}) {
                Branch child;
                child.alice = br.alice;
                child.alice[static_cast<std::size_t>(k)] = o;
                child.bob = br.bob;
                const Matrix& proj = o > 0 ? pp.plus : pp.minus;
                child.sigma = proj * sigma * proj;
                next.push_back(std::move(child));
            }
        }
        branches = std::move(next);
    }

    // Canonical entry order: o1, o2, o3 from slow to fast (+1 before -1),
    // Bob fastest.
    for (int m1 : {+1, -1})
        for (int m2 : {+1, -1})
            for (int m3 : {+1, -1}) {
                if (dist.has_bob) {
                    for (int mb : {+1, -1}) {
                        for (const auto& br : branches)
                            if (br.alice == std::array<int, 3>{m1, m2, m3} && br.bob == mb)
                                dist.entries.push_back(
                                    {br.alice, mb, std::max(br.sigma.trace().real(), 0.0)});
                    }
                } else {
                    for (const auto& br : branches)
                        if (br.alice == std::array<int, 3>{m1, m2, m3})
                            dist.entries.push_back(
                                {br.alice, 0, std::max(br.sigma.trace().real(), 0.0)});
                }
            }
    return dist;
}

double correlator(const JointDistribution& dist, std::span<const int> positions) {
    double total = 0.0;
    for (const auto& e : dist.entries) {
        int prod = 1;
        for (int pos : positions) {
            if (pos >= 1 && pos <= 3) {
                prod *= e.alice[static_cast<std::size_t>(pos - 1)];
            } else if (pos == kBobPosition) {
                if (!dist.has_bob)
                    throw std::invalid_argument("correlator: plan has no Bob setting");
                prod *= e.bob;
            } else {
                throw std::invalid_argument("correlator: position out of range");
            }
        }
        total += prod * e.probability;
    }
    return total;
}

double correlator(const JointDistribution& dist, std::initializer_list<int> positions) {
    return correlator(dist, std::span<const int>(positions.begin(), positions.size()));
}

ChiResult evaluate_chi(const Matrix& state, const Channel& between) {
    ChiResult result;
    for (int k = 0; k < 6; ++k) {
        JointDistribution dist = run_plan(state, {k, std::nullopt}, between);
        double corr = correlator(dist, {1, 2, 3});
        result.sequence_correlators[static_cast<std::size_t>(k)] = corr;
        result.contributions[static_cast<std::size_t>(k)] = sequence_at(k).chi_sign * corr;
        result.total += result.contributions[static_cast<std::size_t>(k)];
    }
    return result;
}

SResult evaluate_s(const Matrix& state, SignMode mode, const Channel& between) {
    SResult result;
    result.mode = mode;
    const auto& terms = remote_term_table();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const RemoteTerm& term = terms[k];
        JointDistribution dist = run_plan(state, {term.sequence_index, term.observable}, between);
        double value = correlator(dist, {term.position, kBobPosition});
        result.signed_values[k] = value;
        result.contributions[k] =
            mode == SignMode::Absolute ? std::abs(value) : term.fixed_sign * value;
        result.total += result.contributions[k];
    }
    return result;
}

CorrelatorReport evaluate_omega(const Matrix& state, SignMode mode, const Channel& between) {
    CorrelatorReport report;
    report.chi = evaluate_chi(state, between);
    report.s = evaluate_s(state, mode, between);
    report.omega = report.chi.total + report.s.total;
    report.lhv_bound_violated = report.omega > kLhvOmegaBound;
    report.nchv_bound_violated = report.chi.total > kNchvChiBound;
    return report;
}

double sequence_moment(const Matrix& state, int sequence_index, const Channel& between) {
    const ContextSequence& seq = sequence_at(sequence_index);
    Matrix o1 = alice_observable(seq.observables[0]);
    Matrix o2 = alice_observable(seq.observables[1]);
    Matrix o3 = alice_observable(seq.observables[2]);
    Matrix sigma = signed_dephase(o1, state);
    sigma = signed_dephase(o2, apply_channel(between, sigma));
    sigma = apply_channel(between, sigma);
    return (o3 * sigma).trace().real();
}

double remote_moment(const Matrix& state, const RemoteTerm& term, const Channel& between) {
    const ContextSequence& seq = sequence_at(term.sequence_index);
    Matrix sigma = dephase(alice_observable(seq.observables[0]), state);
    sigma = apply_channel(between, sigma);
    if (term.position == 3) {
        sigma = dephase(alice_observable(seq.observables[1]), sigma);
        sigma = apply_channel(between, sigma);
    }
    Matrix pair = alice_observable(seq.observables[static_cast<std::size_t>(term.position - 1)]) *
                  bob_observable(term.observable);
    return (pair * sigma).trace().real();
}

NoSignalingReport no_signaling_report(const Matrix& state, const Channel& between) {
    NoSignalingReport report;

    // Bob's +1 marginal per (setting, sequence); binary TV distance is |p - q|.
    for (Obs setting : kBobSettings) {
        std::array<double, 6> plus{};
        for (int s = 0; s < 6; ++s) {
            JointDistribution dist = run_plan(state, {s, setting}, between);
            double p = 0.0;
            for (const auto& e : dist.entries)
                if (e.bob > 0) p += e.probability;
            plus[static_cast<std::size_t>(s)] = p;
        }
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                report.max_bob_marginal_deviation =
                    std::max(report.max_bob_marginal_deviation,
                             std::abs(plus[static_cast<std::size_t>(i)] - plus[static_cast<std::size_t>(j)]));
    }

    // Alice's triple marginal per sequence across Bob's settings and the
    // no-Bob plan; TV distance over the 8 outcome cells.
    for (int s = 0; s < 6; ++s) {
        std::vector<std::array<double, 8>> marginals;
        auto alice_marginal = [](const JointDistribution& dist) {
            std::array<double, 8> m{};
            for (const auto& e : dist.entries) {
                int idx = (e.alice[0] < 0 ? 4 : 0) + (e.alice[1] < 0 ? 2 : 0) + (e.alice[2] < 0 ? 1 : 0);
                m[static_cast<std::size_t>(idx)] += e.probability;
            }
            return m;
        };
        marginals.push_back(alice_marginal(run_plan(state, {s, std::nullopt}, between)));
        for (Obs setting : kBobSettings)
            marginals.push_back(alice_marginal(run_plan(state, {s, setting}, between)));
        for (std::size_t i = 0; i < marginals.size(); ++i)
            for (std::size_t j = i + 1; j < marginals.size(); ++j) {
                double tv = 0.0;
                for (int cell = 0; cell < 8; ++cell)
                    tv += std::abs(marginals[i][static_cast<std::size_t>(cell)] -
                                   marginals[j][static_cast<std::size_t>(cell)]);
                report.max_alice_marginal_deviation =
                    std::max(report.max_alice_marginal_deviation, tv / 2.0);
            }
    }

    report.max_deviation =
        std::max(report.max_bob_marginal_deviation, report.max_alice_marginal_deviation);
    return report;
}

}  // namespace pmbell
