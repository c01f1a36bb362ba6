#include "pmbell/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pmbell {

void NoiseModel::validate() const {
    if (!(state_white_noise >= 0.0 && state_white_noise <= 1.0))
        throw std::invalid_argument("state_white_noise must be in [0,1]");
    if (!std::isfinite(prep_phase_error))
        throw std::invalid_argument("prep_phase_error must be finite");
    if (!(per_measurement_visibility >= 0.0 && per_measurement_visibility <= 1.0))
        throw std::invalid_argument("per_measurement_visibility must be in [0,1]");
    if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0))
        throw std::invalid_argument("detection_efficiency must be in (0,1]");
}

bool NoiseModel::is_ideal() const {
    return state_white_noise == 1.0 && prep_phase_error == 0.0 &&
           per_measurement_visibility == 1.0 && detection_efficiency == 1.0;
}

Matrix apply_noise(const NoiseModel& model) {
    model.validate();
    Matrix pure = density_of(prepared_state(model.prep_phase_error));
    if (model.state_white_noise == 1.0) return pure;
    return model.state_white_noise * pure +
           (1.0 - model.state_white_noise) * Matrix::Identity(kStateDim, kStateDim) / 16.0;
}

Channel measurement_visibility_channel(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("visibility must be in [0,1]");
    if (eta == 1.0) return {};
    // The explicit return type materializes the Eigen expression while its
    // operands are still alive.
    return [eta](const Matrix& rho) -> Matrix {
        Matrix bob = partial_trace(rho, kTotalQubits, {3, 4});
        return eta * rho + (1.0 - eta) * kron(Matrix::Identity(4, 4) / 4.0, bob);
    };
}

CorrelatorReport evaluate_noisy(const NoiseModel& model, SignMode mode) {
    return evaluate_omega(apply_noise(model), mode,
                          measurement_visibility_channel(model.per_measurement_visibility));
}

std::string_view to_string(CalibrationAxes axes) {
    return axes == CalibrationAxes::EtaPhi ? "eta-phi" : "eta-white-noise";
}

CalibrationAxes calibration_axes_from(std::string_view s) {
    if (s == "eta-phi") return CalibrationAxes::EtaPhi;
    if (s == "eta-white-noise") return CalibrationAxes::EtaWhiteNoise;
    throw std::invalid_argument("unknown calibration axes: " + std::string(s));
}

namespace {

struct MomentEvaluator {
    CalibrationAxes axes;
    long long evaluations = 0;
    Matrix ideal = apply_noise(NoiseModel{});

    NoiseModel model_at(double eta, double second) const {
        NoiseModel m;
        m.per_measurement_visibility = eta;
        if (axes == CalibrationAxes::EtaPhi) {
            m.prep_phase_error = second;
        } else {
            m.state_white_noise = second;
        }
        return m;
    }

    // chi is state-independent (product-constraint law, property-tested), so
    // the grid evaluates it on the ideal state and only S on the noisy one.
    double chi(double eta) {
        Channel ch = measurement_visibility_channel(eta);
        double total = 0.0;
        for (int k = 0; k < 6; ++k) total += sequence_at(k).chi_sign * sequence_moment(ideal, k, ch);
        return total;
    }

    double s(double eta, double second) {
        ++evaluations;
        Matrix state = apply_noise(model_at(eta, second));
        Channel ch = measurement_visibility_channel(eta);
        double total = 0.0;
        for (const RemoteTerm& term : remote_term_table())
            total += std::abs(remote_moment(state, term, ch));
        return total;
    }

    double objective(double eta, double second, double chi_target, double s_target) {
        double c = chi(eta) - chi_target;
        double d = s(eta, second) - s_target;
        return c * c + d * d;
    }
};

double golden_section(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

CalibrationResult calibrate(double chi_target, double s_target, CalibrationAxes axes) {
    if (!(chi_target <= 6.0 + 1e-12) || !(s_target <= 12.0 + 1e-12))
        throw std::invalid_argument("calibration targets must satisfy chi <= 6 and S <= 12");

    MomentEvaluator eval{axes};
    const double second_max = axes == CalibrationAxes::EtaPhi ? std::numbers::pi / 2.0 : 1.0;

    // Coarse grid. chi depends only on eta, so it is computed once per row.
    constexpr int kGrid = 101;
    double best_eta = 1.0, best_second = axes == CalibrationAxes::EtaPhi ? 0.0 : 1.0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        double eta = double(i) / (kGrid - 1);
        double chi_err = eval.chi(eta) - chi_target;
        for (int j = 0; j < kGrid; ++j) {
            double second = second_max * double(j) / (kGrid - 1);
            double s_err = eval.s(eta, second) - s_target;
            double obj = chi_err * chi_err + s_err * s_err;
            if (obj < best_obj) {
                best_obj = obj;
                best_eta = eta;
                best_second = second;
            }
        }
    }

    // Golden-section refinement, alternating axes. The objective's valley is
    // diagonal in (eta, second), so coordinate descent needs several rounds.
    const double eta_step = 1.0 / (kGrid - 1);
    const double second_step = second_max / (kGrid - 1);
    for (int round = 0; round < 12; ++round) {
        best_eta = golden_section(
            [&](double eta) { return eval.objective(eta, best_second, chi_target, s_target); },
            std::max(0.0, best_eta - eta_step), std::min(1.0, best_eta + eta_step), 40);
        best_second = golden_section(
            [&](double second) { return eval.objective(best_eta, second, chi_target, s_target); },
            std::max(0.0, best_second - second_step), std::min(second_max, best_second + second_step),
            40);
    }

    CalibrationResult result;
    result.model = eval.model_at(best_eta, best_second);
    result.chi = eval.chi(best_eta);
    result.s = eval.s(best_eta, best_second);
    result.omega = result.chi + result.s;
    result.chi_target = chi_target;
    result.s_target = s_target;
    result.residual_chi = result.chi - chi_target;
    result.residual_s = result.s - s_target;
    result.converged = std::abs(result.residual_chi) <= kCalibrationTol &&
                       std::abs(result.residual_s) <= kCalibrationTol;
    result.evaluations = eval.evaluations;
    return result;
}

double significance(double value, double standard_error, double bound) {
    if (!(standard_error > 0.0))
        throw std::invalid_argument("significance: standard error must be positive");
    return (value - bound) / standard_error;
}

}  // namespace pmbell
