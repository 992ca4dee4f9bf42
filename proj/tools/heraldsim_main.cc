// Command-line front end: runs one scenario and writes its CSV/JSON artifacts.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heraldsim/errors.h"
#include "heraldsim/scenario.h"

namespace {

struct Flags {
    std::optional<std::string> out;
    std::optional<std::string> config;
    std::optional<std::string> grid;
    std::optional<int> cutoff;
    std::optional<std::string> state;
    std::optional<double> alpha;
    std::optional<double> s;
    std::optional<double> xi;
    std::optional<double> keep;
    std::optional<std::string> mode;
    std::optional<double> eta;
    std::optional<int> samples;
    std::vector<double> etas;
};

// Keys each subcommand exposes as flags, beyond --out/--config.
const std::map<std::string, std::vector<std::string>> kFlagSets{
    {"wigner", {"grid", "cutoff", "state", "alpha", "s", "xi"}},
    {"cat-atten", {"grid", "cutoff", "alpha", "keep", "mode", "eta"}},
    {"smsv-atten", {"grid", "cutoff", "s", "xi", "keep", "mode", "eta"}},
    {"mzi-sweep", {"cutoff", "xi", "keep", "mode", "eta", "samples"}},
    {"eta-sweep", {"cutoff", "xi", "keep", "samples", "etas"}},
};

const std::vector<std::string> kAllFlags{"grid", "cutoff", "state", "alpha", "s",
                                         "xi",   "keep",   "mode",  "eta",   "samples", "etas"};

void add_flags(CLI::App &cmd, Flags &f, const std::vector<std::string> &keys) {
    cmd.add_option("--out", f.out, "Output directory (default: current directory)");
    cmd.add_option("--config", f.config, "JSON run manifest; flags override its values");
    for (const auto &key : keys) {
        if (key == "grid") cmd.add_option("--grid", f.grid, "Phase-space grid MIN:MAX:POINTS (default -5:5:201)");
        if (key == "cutoff") cmd.add_option("--cutoff", f.cutoff, "Photon-number cutoff (per mode)");
        if (key == "state") cmd.add_option("--state", f.state, "Input state: cat, coherent or smsv");
        if (key == "alpha") cmd.add_option("--alpha", f.alpha, "Real coherent amplitude");
        if (key == "s") cmd.add_option("--s", f.s, "Squeezing parameter s = exp(2 xi)");
        if (key == "xi") cmd.add_option("--xi", f.xi, "Squeezing strength xi");
        if (key == "keep") cmd.add_option("--keep", f.keep, "Amplitude kept by the attenuator");
        if (key == "mode") cmd.add_option("--mode", f.mode, "ordinary, heralded or efficiency");
        if (key == "eta") cmd.add_option("--eta", f.eta, "Herald detector efficiency");
        if (key == "samples") cmd.add_option("--samples", f.samples, "Number of phase samples");
        if (key == "etas") cmd.add_option("--etas", f.etas, "Detector efficiencies to sweep")->delimiter(',');
    }
}

heraldsim::ScenarioConfig to_config(const std::string &scenario, const Flags &f) {
    heraldsim::ScenarioConfig flags;
    flags.scenario = scenario;
    auto &p = flags.parameters;
    if (f.cutoff) p["cutoff"] = *f.cutoff;
    if (f.state) p["state"] = *f.state;
    if (f.alpha) p["alpha"] = *f.alpha;
    if (f.s) p["s"] = *f.s;
    if (f.xi) p["xi"] = *f.xi;
    if (f.keep) p["keep"] = *f.keep;
    if (f.mode) p["mode"] = *f.mode;
    if (f.eta) p["eta"] = *f.eta;
    if (f.samples) p["samples"] = *f.samples;
    if (!f.etas.empty()) p["etas"] = f.etas;
    if (f.out) flags.output = *f.out;
    if (f.grid) flags.grid = *f.grid;

    heraldsim::ScenarioConfig base;
    if (f.config) {
        base = heraldsim::load_config(*f.config);
    }
    return heraldsim::merge(std::move(base), flags);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulates ordinary and heralded (noiseless) attenuation of nonclassical light"};
    app.set_version_flag("--version", std::string(heraldsim::kToolName) + " " + heraldsim::kToolVersion);
    app.require_subcommand(1);

    std::map<std::string, Flags> flags;
    std::map<std::string, CLI::App *> commands;
    for (const auto &[name, keys] : kFlagSets) {
        auto *cmd = app.add_subcommand(name, "Run the " + name + " scenario");
        add_flags(*cmd, flags[name], keys);
        commands[name] = cmd;
    }
    std::string validate_target;
    Flags validate_flags;
    auto *validate_cmd = app.add_subcommand("validate", "Check a scenario config without running it");
    validate_cmd->add_option("scenario", validate_target, "Scenario to check")->required();
    add_flags(*validate_cmd, validate_flags, kAllFlags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return heraldsim::kExitInvalidConfig;
    }

    try {
        if (validate_cmd->parsed()) {
            const auto config = to_config(validate_target, validate_flags);
            const auto diagnostics = heraldsim::validate(config);
            for (const auto &d : diagnostics) {
                std::cout << d << "\n";
            }
            if (diagnostics.empty()) {
                std::cout << "ok\n";
                return heraldsim::kExitOk;
            }
            return heraldsim::kExitInvalidConfig;
        }
        for (const auto &[name, cmd] : commands) {
            if (cmd->parsed()) {
                return heraldsim::run(to_config(name, flags[name]), std::cerr);
            }
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return heraldsim::kExitInvalidConfig;
    }
    return heraldsim::kExitInvalidConfig;
}
