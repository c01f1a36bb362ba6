#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmbell/model.hpp"

namespace pmbell {

// Channel applied to the joint state between Alice's measurements (noise hook).
// An empty function means the identity channel.
using Channel = std::function<Matrix(const Matrix&)>;

struct MeasurementPlan {
    int sequence_index = 0;
    std::optional<Obs> bob_setting;
    std::string id() const;  // "C.A.B" or "C.A.B|B'"
};

inline constexpr int kBobPosition = 4;  // position tag for Bob in correlator()

struct OutcomeEntry {
    std::array<int, 3> alice;  // o1, o2, o3 in sequence order
    int bob = 0;               // +1/-1, or 0 when the plan has no Bob setting
    double probability = 0.0;
};

// Joint outcome distribution for one plan. Entries are kept in a fixed
// canonical order (o1, o2, o3 slow to fast, +1 before -1, Bob fastest),
// including explicit zero-probability branches.
struct JointDistribution {
    MeasurementPlan plan;
    bool has_bob = false;
    std::vector<OutcomeEntry> entries;
    double probability_sum() const;
};

// Exact joint distribution from iterated projective updates in sequence order,
// with `between` applied before Alice's second and third measurements.
JointDistribution run_plan(const Matrix& state, const MeasurementPlan& plan,
                           const Channel& between = {});

// Expectation of the product of the outcomes at the selected positions
// (1..3 for Alice, kBobPosition for Bob).
double correlator(const JointDistribution& dist, std::span<const int> positions);
double correlator(const JointDistribution& dist, std::initializer_list<int> positions);

struct ChiResult {
    std::array<double, 6> sequence_correlators;  // <o1 o2 o3> per sequence
    std::array<double, 6> contributions;         // chi_sign * correlator
    double total = 0.0;
};

struct SResult {
    std::array<double, 12> signed_values;  // <X X'> inside the term's sequence
    std::array<double, 12> contributions;  // |.| or fixed_sign * (.) per mode
    SignMode mode = SignMode::Absolute;
    double total = 0.0;
};

struct CorrelatorReport {
    ChiResult chi;
    SResult s;
    double omega = 0.0;
    bool lhv_bound_violated = false;   // omega > 16
    bool nchv_bound_violated = false;  // chi > 4
};

inline constexpr double kNchvChiBound = 4.0;
inline constexpr double kLhvOmegaBound = 16.0;

ChiResult evaluate_chi(const Matrix& state, const Channel& between = {});
SResult evaluate_s(const Matrix& state, SignMode mode, const Channel& between = {});
CorrelatorReport evaluate_omega(const Matrix& state, SignMode mode, const Channel& between = {});

// Algebraic route to the same moments, without building distributions.
// Sequential dephasing reduces a product correlator to a single trace;
// used by the calibration grid and as the second route in dual tests.
double sequence_moment(const Matrix& state, int sequence_index, const Channel& between = {});
double remote_moment(const Matrix& state, const RemoteTerm& term, const Channel& between = {});

struct NoSignalingReport {
    // Largest pairwise total-variation distance between Bob's marginal for a
    // fixed setting across Alice's six sequences, and between Alice's triple
    // marginal for a fixed sequence across Bob's settings (and no-Bob plan).
    double max_bob_marginal_deviation = 0.0;
    double max_alice_marginal_deviation = 0.0;
    double max_deviation = 0.0;
};

NoSignalingReport no_signaling_report(const Matrix& state, const Channel& between = {});

}  // namespace pmbell
