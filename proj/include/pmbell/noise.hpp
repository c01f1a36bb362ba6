#pragma once

#include "pmbell/sequential.hpp"

namespace pmbell {

// Imperfection model for the prepared state and the sequential measurements.
//   state_white_noise v:  rho = v * |Psi(phi)><Psi(phi)| + (1 - v) * I/16
//   prep_phase_error phi: relative phase on the |10> component of each singlet
//   per_measurement_visibility eta: depolarizing channel on Alice's qubit pair
//       applied before her second and third measurements
//   detection_efficiency: outcome-independent Bernoulli thinning at sampling time
struct NoiseModel {
    double state_white_noise = 1.0;
    double prep_phase_error = 0.0;
    double per_measurement_visibility = 1.0;
    double detection_efficiency = 1.0;

    void validate() const;
    bool is_ideal() const;
};

// Noisy prepared state. Visibility and efficiency are consumed elsewhere
// (sequential engine and sampling respectively).
Matrix apply_noise(const NoiseModel& model);

// Depolarizing channel on Alice's qubits (1,2); empty channel when eta == 1
// so the noiseless pipeline is bit-identical to the ideal one.
Channel measurement_visibility_channel(double eta);

CorrelatorReport evaluate_noisy(const NoiseModel& model, SignMode mode);

enum class CalibrationAxes { EtaPhi, EtaWhiteNoise };
std::string_view to_string(CalibrationAxes axes);
CalibrationAxes calibration_axes_from(std::string_view s);

struct CalibrationResult {
    NoiseModel model;
    double chi = 0.0;
    double s = 0.0;
    double omega = 0.0;
    double chi_target = 0.0;
    double s_target = 0.0;
    double residual_chi = 0.0;  // chi - chi_target
    double residual_s = 0.0;
    bool converged = false;  // both residuals within +/- 0.02
    long long evaluations = 0;
};

inline constexpr double kCalibrationTol = 0.02;

// Deterministic coarse 101x101 grid over the two free parameters followed by
// golden-section refinement per axis. EtaPhi fixes v = 1 and searches
// (eta, phi); EtaWhiteNoise fixes phi = 0 and searches (eta, v).
CalibrationResult calibrate(double chi_target, double s_target,
                            CalibrationAxes axes = CalibrationAxes::EtaPhi);

// (value - bound) / standard_error.
double significance(double value, double standard_error, double bound);

}  // namespace pmbell
