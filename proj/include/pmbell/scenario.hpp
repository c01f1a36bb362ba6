#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmbell/bounds.hpp"
#include "pmbell/sampling.hpp"

namespace pmbell {

using OrderedJson = nlohmann::ordered_json;

enum class Mode { QuantumExact, Bounds, Sample, Calibrate, Significance, NoSignaling };
std::string_view to_string(Mode mode);
Mode mode_from(std::string_view s);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SignificanceInput {
    double value = 0.0;
    double standard_error = 0.0;
    double bound = 0.0;
};

struct CalibrationInput {
    double chi_target = 5.817;
    double s_target = 11.430;
    CalibrationAxes axes = CalibrationAxes::EtaPhi;
};

struct ScenarioConfig {
    Mode mode = Mode::QuantumExact;
    NoiseModel noise;
    long long shots = 1'000'000;
    std::uint64_t seed = 12345;
    SignMode sign_mode = SignMode::Absolute;
    std::string model = "lhv";  // bounds sweep: nchv | lhv | nc-local
    bool past_only = false;
    bool chi_from_marginals = false;
    SignificanceInput significance;
    CalibrationInput calibration;
    std::string out_dir;
};

// Schema-validating parse; unknown keys are rejected. Error messages carry
// JSON-pointer paths (e.g. "/noise/state_white_noise: must be in [0,1]").
ScenarioConfig parse_config(const nlohmann::json& raw);
OrderedJson config_json(const ScenarioConfig& config);

struct Verdict {
    std::string bound;  // names the bound being checked
    double value = 0.0;
    double threshold = 0.0;
    double margin = 0.0;    // value - threshold
    bool violated = false;  // margin > 0
    bool asserted = false;  // when true a failed expectation drives exit code 1
    bool passed = true;
    std::string statement;
};

struct SampledNoSignaling {
    double max_abs_z = 0.0;  // largest cellwise marginal difference in SE units
    double max_tv = 0.0;
    long long comparisons = 0;
    long long shots_per_config = 0;
};

struct RunReport {
    ScenarioConfig config;
    std::optional<CorrelatorReport> correlators;
    std::optional<EstimateReport> estimates;
    std::vector<SampledRun> samples;
    std::optional<BoundReport> bound;
    std::optional<CalibrationResult> calibration;
    std::optional<double> significance_z;
    std::optional<NoSignalingReport> nosignal_exact;
    std::optional<SampledNoSignaling> nosignal_sampled;
    std::vector<Verdict> verdicts;
    double wall_ms = 0.0;  // measured, deliberately not serialized (byte-stable files)
    bool all_asserted_verdicts_hold() const;
};

RunReport run_scenario(const ScenarioConfig& config);

// Deterministic JSON (insertion-ordered keys, floats rounded to 12 significant
// digits before storage), so identical runs serialize byte-identically.
OrderedJson report_json(const RunReport& report);

// Writes report.json, terms.csv (when correlator/estimate data is present),
// counts.csv (when sampled data is present) and model.json (quantum-exact
// runs). Returns the written paths.
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::filesystem::path& dir);

double round12(double x);
std::string format12(double x);

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

}  // namespace pmbell
