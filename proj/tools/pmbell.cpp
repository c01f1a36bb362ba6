// Command-line runner for the sequential-measurement simulator: exact quantum
// evaluation, hidden-variable bound sweeps, finite-shot sampling, noise
// calibration, significance arithmetic and no-signaling checks.
//
// Exit codes: 0 success, 1 verdict failure, 2 config error, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pmbell/scenario.hpp"

namespace {

using namespace pmbell;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    bool have_seed = false;
    std::uint64_t seed = 0;
    bool have_shots = false;
    long long shots = 0;
    std::string sign_mode;
    std::string model;
    bool past_only = false;
    // simulate / sample / nosignal noise overrides
    bool have_white_noise = false;
    double white_noise = 1.0;
    bool have_phase = false;
    double phase = 0.0;
    bool have_visibility = false;
    double visibility = 1.0;
    bool have_efficiency = false;
    double efficiency = 1.0;
    bool chi_from_marginals = false;
    // significance
    bool have_value = false;
    double value = 0.0;
    bool have_se = false;
    double se = 0.0;
    bool have_bound = false;
    double bound = 0.0;
    // calibrate
    bool have_chi_target = false;
    double chi_target = 0.0;
    bool have_s_target = false;
    double s_target = 0.0;
    std::string axes;
};

ScenarioConfig build_config(Mode mode, const CliOptions& opt) {
    nlohmann::json raw;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw IoError("cannot read config file: " + opt.config_path);
        try {
            in >> raw;
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
        }
    } else {
        raw = nlohmann::json::object();
    }
    if (raw.contains("mode")) {
        if (!raw.at("mode").is_string() || mode_from(raw.at("mode").get<std::string>()) != mode)
            throw ConfigError("/mode: config file mode does not match the subcommand");
    } else {
        raw["mode"] = std::string(to_string(mode));
    }

    auto noise = [&raw]() -> nlohmann::json& {
        if (!raw.contains("noise")) raw["noise"] = nlohmann::json::object();
        return raw["noise"];
    };
    if (opt.have_white_noise) noise()["state_white_noise"] = opt.white_noise;
    if (opt.have_phase) noise()["prep_phase_error"] = opt.phase;
    if (opt.have_visibility) noise()["per_measurement_visibility"] = opt.visibility;
    if (opt.have_efficiency) noise()["detection_efficiency"] = opt.efficiency;
    if (opt.have_seed) raw["seed"] = opt.seed;
    if (opt.have_shots) raw["shots"] = opt.shots;
    if (!opt.sign_mode.empty()) raw["sign_mode"] = opt.sign_mode;
    if (!opt.model.empty()) raw["model"] = opt.model;
    if (opt.past_only) raw["past_only"] = true;
    if (opt.chi_from_marginals) raw["chi_from_marginals"] = true;

    if (opt.have_value || opt.have_se || opt.have_bound) {
        if (!raw.contains("significance")) raw["significance"] = nlohmann::json::object();
        if (opt.have_value) raw["significance"]["value"] = opt.value;
        if (opt.have_se) raw["significance"]["standard_error"] = opt.se;
        if (opt.have_bound) raw["significance"]["bound"] = opt.bound;
    }
    if (opt.have_chi_target || opt.have_s_target || !opt.axes.empty()) {
        if (!raw.contains("calibration")) raw["calibration"] = nlohmann::json::object();
        if (opt.have_chi_target) raw["calibration"]["chi_target"] = opt.chi_target;
        if (opt.have_s_target) raw["calibration"]["s_target"] = opt.s_target;
        if (!opt.axes.empty()) raw["calibration"]["axes"] = opt.axes;
    }
    if (!opt.out_dir.empty()) raw["out_dir"] = opt.out_dir;

    ScenarioConfig config = parse_config(raw);
    if (config.out_dir.empty()) {
        const char* env = std::getenv("PMBELL_OUT_DIR");
        config.out_dir = env && *env ? env : "pmbell-out";
    }
    return config;
}

void print_summary(const RunReport& report) {
    if (report.correlators) {
        const auto& r = *report.correlators;
        std::cout << "chi   = " << format12(r.chi.total) << "\n"
                  << "S     = " << format12(r.s.total) << "  (" << to_string(r.s.mode)
                  << " mode)\n"
                  << "omega = " << format12(r.omega) << "\n";
    }
    if (report.bound) {
        const auto& b = *report.bound;
        std::cout << "sweep " << b.model_class;
        if (b.mode) std::cout << " [" << to_string(*b.mode) << (b.past_only ? ", past-only" : "")
                              << "]";
        std::cout << ": max = " << b.maximum << ", maximizers = " << b.maximizer_count
                  << ", strategy space = " << b.strategy_space << "\n";
    }
    if (report.estimates) {
        const auto& e = *report.estimates;
        std::cout << "chi   = " << format12(e.chi.value) << " +/- " << format12(e.chi.standard_error)
                  << "\n"
                  << "S     = " << format12(e.s.value) << " +/- " << format12(e.s.standard_error)
                  << "\n"
                  << "omega = " << format12(e.omega.value) << " +/- "
                  << format12(e.omega.standard_error) << "\n";
    }
    if (report.calibration) {
        const auto& c = *report.calibration;
        std::cout << "calibrated model: visibility = " << format12(c.model.per_measurement_visibility)
                  << ", phase = " << format12(c.model.prep_phase_error)
                  << ", white noise = " << format12(c.model.state_white_noise) << "\n"
                  << "chi = " << format12(c.chi) << " (target " << format12(c.chi_target) << "), S = "
                  << format12(c.s) << " (target " << format12(c.s_target) << "), omega = "
                  << format12(c.omega) << (c.converged ? "" : "  [NOT CONVERGED]") << "\n";
    }
    if (report.significance_z)
        std::cout << "significance = " << format12(*report.significance_z)
                  << " standard deviations\n";
    if (report.nosignal_exact)
        std::cout << "no-signaling exact max deviation = "
                  << format12(report.nosignal_exact->max_deviation) << "\n";
    if (report.nosignal_sampled)
        std::cout << "no-signaling sampled max |z| = " << format12(report.nosignal_sampled->max_abs_z)
                  << " over " << report.nosignal_sampled->comparisons << " comparisons\n";
    for (const Verdict& v : report.verdicts) std::cout << v.statement << "\n";
}

int run(Mode mode, const CliOptions& opt) {
    ScenarioConfig config = build_config(mode, opt);
    RunReport report = run_scenario(config);
    auto written = emit_report(report, config.out_dir);
    print_summary(report);
    for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
    std::cerr << "pmbell: " << to_string(mode) << " completed in " << format12(report.wall_ms)
              << " ms\n";
    return report.all_asserted_verdicts_hold() ? kExitOk : kExitVerdictFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peres-Mermin sequential-measurement simulator and bound verifier"};
    app.require_subcommand(1);

    CliOptions opt;
    Mode mode = Mode::QuantumExact;

    auto add_common = [&opt](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "JSON config file");
        cmd->add_option("--out", opt.out_dir, "output directory (default $PMBELL_OUT_DIR or ./pmbell-out)");
        cmd->add_option("--seed", opt.seed, "master RNG seed")->each([&opt](const std::string&) {
            opt.have_seed = true;
        });
        cmd->add_option("--shots", opt.shots, "shots per configuration")
            ->each([&opt](const std::string&) { opt.have_shots = true; });
        cmd->add_option("--sign-mode", opt.sign_mode, "S aggregation: absolute | fixed")
            ->check(CLI::IsMember({"absolute", "fixed"}));
    };
    auto add_noise = [&opt](CLI::App* cmd) {
        cmd->add_option("--white-noise", opt.white_noise, "ideal-state fraction v in [0,1]")
            ->each([&opt](const std::string&) { opt.have_white_noise = true; });
        cmd->add_option("--phase-error", opt.phase, "singlet preparation phase error (radians)")
            ->each([&opt](const std::string&) { opt.have_phase = true; });
        cmd->add_option("--visibility", opt.visibility, "per-measurement visibility eta in [0,1]")
            ->each([&opt](const std::string&) { opt.have_visibility = true; });
        cmd->add_option("--efficiency", opt.efficiency, "detection efficiency in (0,1]")
            ->each([&opt](const std::string&) { opt.have_efficiency = true; });
    };

    CLI::App* simulate = app.add_subcommand("simulate", "exact quantum chi, S, omega under a noise model");
    add_common(simulate);
    add_noise(simulate);

    CLI::App* bounds = app.add_subcommand("bounds", "exhaustive hidden-variable bound sweeps");
    add_common(bounds);
    bounds->add_option("--model", opt.model, "model class: nchv | lhv | nc-local")
        ->check(CLI::IsMember({"nchv", "lhv", "nc-local"}));
    bounds->add_flag("--past-only", opt.past_only,
                     "restrict Alice to past-only sequence dependence (lhv sweeps)");

    CLI::App* sample = app.add_subcommand("sample", "finite-shot sampling with error estimation");
    add_common(sample);
    add_noise(sample);
    sample->add_flag("--chi-from-marginals", opt.chi_from_marginals,
                     "estimate chi from the Bob-tagged runs instead of dedicated ones");

    CLI::App* calibrate = app.add_subcommand("calibrate", "fit a noise model to chi and S targets");
    add_common(calibrate);
    calibrate->add_option("--chi-target", opt.chi_target, "target chi value (default 5.817)")
        ->each([&opt](const std::string&) { opt.have_chi_target = true; });
    calibrate->add_option("--s-target", opt.s_target, "target S value (default 11.430)")
        ->each([&opt](const std::string&) { opt.have_s_target = true; });
    calibrate->add_option("--axes", opt.axes, "search axes: eta-phi | eta-white-noise")
        ->check(CLI::IsMember({"eta-phi", "eta-white-noise"}));

    CLI::App* significance = app.add_subcommand("significance", "(value - bound) / standard error");
    add_common(significance);
    significance->add_option("--value", opt.value, "measured value")
        ->each([&opt](const std::string&) { opt.have_value = true; });
    significance->add_option("--se", opt.se, "standard error")->each([&opt](const std::string&) {
        opt.have_se = true;
    });
    significance->add_option("--bound", opt.bound, "classical bound")
        ->each([&opt](const std::string&) { opt.have_bound = true; });

    CLI::App* nosignal = app.add_subcommand("nosignal", "no-signaling marginal checks (exact and sampled)");
    add_common(nosignal);
    add_noise(nosignal);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) mode = Mode::QuantumExact;
    if (bounds->parsed()) mode = Mode::Bounds;
    if (sample->parsed()) mode = Mode::Sample;
    if (calibrate->parsed()) mode = Mode::Calibrate;
    if (significance->parsed()) mode = Mode::Significance;
    if (nosignal->parsed()) mode = Mode::NoSignaling;

    try {
        return run(mode, opt);
    } catch (const pmbell::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pmbell::kExitConfigError;
    } catch (const pmbell::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return pmbell::kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pmbell::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pmbell::kExitIoError;
    }
}
