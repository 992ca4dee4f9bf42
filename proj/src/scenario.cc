#include "heraldsim/scenario.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "heraldsim/channels.h"
#include "heraldsim/errors.h"
#include "heraldsim/fock_states.h"
#include "heraldsim/interferometer.h"
#include "heraldsim/wigner.h"

namespace heraldsim {

namespace {

using nlohmann::json;

constexpr double kDefaultKeep = std::numbers::sqrt2 / 2.0;
constexpr int kDefaultMziCutoff = 10;

struct GridSpec {
    double min = -5.0;
    double max = 5.0;
    int points = 201;
};

const std::map<std::string, std::set<std::string>> &allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"wigner", {"state", "alpha", "s", "xi", "cutoff"}},
        {"cat-atten", {"alpha", "keep", "mode", "eta", "cutoff"}},
        {"smsv-atten", {"s", "xi", "keep", "mode", "eta", "cutoff"}},
        {"mzi-sweep", {"xi", "keep", "mode", "eta", "samples", "cutoff"}},
        {"eta-sweep", {"xi", "keep", "samples", "cutoff", "etas"}},
    };
    return keys;
}

bool uses_grid(const std::string &scenario) {
    return scenario == "wigner" || scenario == "cat-atten" || scenario == "smsv-atten";
}

bool is_mzi(const std::string &scenario) {
    return scenario == "mzi-sweep" || scenario == "eta-sweep";
}

std::optional<GridSpec> parse_grid(const std::string &text) {
    GridSpec spec;
    std::istringstream in(text);
    char c1 = 0;
    char c2 = 0;
    if (!(in >> spec.min >> c1 >> spec.max >> c2 >> spec.points) || c1 != ':' || c2 != ':' || !in.eof()) {
        return std::nullopt;
    }
    return spec;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

HeraldMode parse_mode(const std::string &mode) {
    if (mode == "ordinary") {
        return HeraldMode::kOrdinary;
    }
    if (mode == "heralded") {
        return HeraldMode::kHeralded;
    }
    return HeraldMode::kEfficiency;
}

// Typed accessors over the raw parameter document; each appends a diagnostic
// instead of throwing.
class Checker {
   public:
    Checker(const json &params, std::vector<std::string> &diagnostics) : params_(params), diag_(diagnostics) {}

    std::optional<double> number(const std::string &key, double lo, double hi) {
        if (!params_.contains(key)) {
            return std::nullopt;
        }
        const auto &v = params_.at(key);
        if (!v.is_number()) {
            diag_.push_back(key + ": expected a number");
            return std::nullopt;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi) {
            std::ostringstream msg;
            msg << key << " = " << x << " outside [" << lo << ", " << hi << "]";
            diag_.push_back(msg.str());
            return std::nullopt;
        }
        return x;
    }

    std::optional<int> integer(const std::string &key, int lo, int hi) {
        if (!params_.contains(key)) {
            return std::nullopt;
        }
        const auto &v = params_.at(key);
        if (!v.is_number_integer()) {
            diag_.push_back(key + ": expected an integer");
            return std::nullopt;
        }
        const auto x = v.get<long long>();
        if (x < lo || x > hi) {
            std::ostringstream msg;
            msg << key << " = " << x << " outside [" << lo << ", " << hi << "]";
            diag_.push_back(msg.str());
            return std::nullopt;
        }
        return static_cast<int>(x);
    }

    std::optional<std::string> choice(const std::string &key, const std::set<std::string> &options) {
        if (!params_.contains(key)) {
            return std::nullopt;
        }
        const auto &v = params_.at(key);
        if (!v.is_string() || !options.contains(v.get<std::string>())) {
            std::string list;
            for (const auto &o : options) {
                list += (list.empty() ? "" : "|") + o;
            }
            diag_.push_back(key + ": expected one of {" + list + "}");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

   private:
    const json &params_;
    std::vector<std::string> &diag_;
};

// Fully resolved parameters shared by every scenario.
struct Resolved {
    std::string state = "cat";
    double alpha = 2.0;
    double s = 3.0;
    double xi = 0.5 * std::log(3.0);
    double keep = kDefaultKeep;
    std::string mode = "heralded";
    double eta = 1.0;
    int samples = 64;
    int cutoff = kDefaultCutoff;
    std::vector<double> etas{0.0, 0.25, 0.5, 0.75, 1.0};
    GridSpec grid;
};

// Fills defaults and checks every value; `diagnostics` collects all violations.
Resolved resolve(const ScenarioConfig &config, std::vector<std::string> &diagnostics) {
    Resolved r;
    const auto &names = scenario_names();
    if (std::find(names.begin(), names.end(), config.scenario) == names.end()) {
        diagnostics.push_back("unknown scenario '" + config.scenario + "'");
        return r;
    }
    if (!config.parameters.is_object()) {
        diagnostics.push_back("parameters must be a key-value object");
        return r;
    }
    const auto &allowed = allowed_keys().at(config.scenario);
    for (const auto &[key, value] : config.parameters.items()) {
        if (!allowed.contains(key)) {
            diagnostics.push_back("unknown key '" + key + "' for scenario " + config.scenario);
        }
    }

    const bool mzi = is_mzi(config.scenario);
    const std::size_t before = diagnostics.size();
    Checker check(config.parameters, diagnostics);
    if (auto v = check.choice("state", {"cat", "coherent", "smsv"})) r.state = *v;
    if (auto v = check.number("alpha", -10.0, 10.0)) r.alpha = *v;
    if (auto v = check.number("keep", 0.0, 1.0)) r.keep = *v;
    if (auto v = check.choice("mode", {"ordinary", "heralded", "efficiency"})) r.mode = *v;
    if (auto v = check.number("eta", 0.0, 1.0)) r.eta = *v;
    if (auto v = check.integer("samples", 8, 1 << 16)) r.samples = *v;

    r.cutoff = mzi ? kDefaultMziCutoff : kDefaultCutoff;
    if (auto v = check.integer("cutoff", 2, mzi ? 40 : kMaxWignerCutoff)) r.cutoff = *v;

    if (mzi) {
        r.xi = 0.5;
    }
    const bool has_s = config.parameters.contains("s");
    const bool has_xi = config.parameters.contains("xi");
    if (has_s && has_xi) {
        diagnostics.push_back("give either s or xi, not both");
    }
    if (auto v = check.number("s", 1e-6, 1e6)) r.xi = 0.5 * std::log(*v);
    if (auto v = check.number("xi", -7.0, 7.0)) r.xi = *v;
    r.s = std::exp(2.0 * r.xi);

    if (config.parameters.contains("etas")) {
        const auto &etas = config.parameters.at("etas");
        r.etas.clear();
        if (!etas.is_array() || etas.empty()) {
            diagnostics.push_back("etas: expected a non-empty list of numbers");
        } else {
            for (const auto &e : etas) {
                if (!e.is_number() || !(e.get<double>() >= 0.0 && e.get<double>() <= 1.0)) {
                    diagnostics.push_back("etas: every entry must be a number in [0, 1]");
                    break;
                }
                r.etas.push_back(e.get<double>());
            }
        }
    }

    if (config.grid) {
        if (!uses_grid(config.scenario)) {
            diagnostics.push_back("grid is not used by scenario " + config.scenario);
        } else if (auto g = parse_grid(*config.grid)) {
            if (g->points < 3 || !(g->max > g->min)) {
                diagnostics.push_back("grid: need MAX > MIN and at least 3 points");
            } else {
                r.grid = *g;
            }
        } else {
            diagnostics.push_back("grid: expected MIN:MAX:POINTS");
        }
    }

    // Truncation checks need in-range parameters.
    if (diagnostics.size() != before) {
        return r;
    }
    try {
        if (config.scenario == "cat-atten" || (config.scenario == "wigner" && r.state == "cat")) {
            even_cat(r.alpha, r.cutoff);
        } else if (config.scenario == "wigner" && r.state == "coherent") {
            coherent(r.alpha, r.cutoff);
        } else if (mzi) {
            tmsv(r.xi, r.cutoff);
        } else {
            smsv(r.xi, r.cutoff);
        }
    } catch (const TruncationError &e) {
        diagnostics.push_back(std::string("truncation check fails: ") + e.what());
    }
    return r;
}

json to_json(const Resolved &r, const ScenarioConfig &config) {
    json out;
    const auto &keys = allowed_keys().at(config.scenario);
    if (keys.contains("state")) out["state"] = r.state;
    if (keys.contains("alpha") && (config.scenario != "wigner" || r.state != "smsv")) out["alpha"] = r.alpha;
    if (keys.contains("xi") && (config.scenario != "wigner" || r.state == "smsv")) {
        out["xi"] = r.xi;
        out["s"] = r.s;
    }
    if (keys.contains("keep")) out["keep"] = r.keep;
    if (keys.contains("mode")) out["mode"] = r.mode;
    if (keys.contains("eta")) out["eta"] = r.eta;
    if (keys.contains("samples")) out["samples"] = r.samples;
    if (keys.contains("etas")) out["etas"] = r.etas;
    out["cutoff"] = r.cutoff;
    if (uses_grid(config.scenario)) {
        out["grid"] = {{"min", r.grid.min}, {"max", r.grid.max}, {"points", r.grid.points}};
    }
    return out;
}

std::string csv(const WignerGrid &w) {
    std::ostringstream out;
    write_csv(out, w);
    return out.str();
}

json wigner_summary(const WignerGrid &w) {
    return {{"integral", w.integral()}, {"min", w.min_value()}, {"negativity_volume", negativity_volume(w)}};
}

struct Attenuated {
    WignerGrid wigner;
    double probability;
};

Attenuated attenuate(const FockKet &input, const Resolved &r, const PhaseSpaceGrid &grid) {
    const MultiModeKet split = inject(input, BeamSplitter::from_transmissivity(r.keep));
    switch (parse_mode(r.mode)) {
        case HeraldMode::kOrdinary:
            return {wigner_mixed(trace_out(split, 1), grid), 1.0};
        case HeraldMode::kHeralded: {
            const auto outcome = herald_zero(split);
            return {wigner_pure(outcome.ket(), grid), outcome.probability};
        }
        case HeraldMode::kEfficiency: {
            const auto outcome = herald_noclick(split, r.eta);
            return {wigner_mixed(outcome.density(), grid), outcome.probability};
        }
    }
    throw ParameterError("unknown mode");
}

MziConfig mzi_config(const Resolved &r) {
    MziConfig c;
    c.xi = r.xi;
    c.arm_keep = r.keep;
    c.mode = parse_mode(r.mode);
    c.eta = r.eta;
    c.phi_samples = r.samples;
    c.cutoff = r.cutoff;
    return c;
}

const char *plots_text(const std::string &scenario) {
    if (scenario == "wigner") {
        return "# Plotting notes\n\n"
               "`wigner.csv` holds W(x, p) on the requested grid (columns `x,p,w`, rows ordered by x then p).\n"
               "Render it as a surface or heat map. With `--state cat --alpha 2` it is the input cat state;\n"
               "with `--alpha 1.414` the reduced-amplitude reference cat; with `--state smsv --s 3` the\n"
               "squeezed vacuum whose Gaussian fit is stored in `fit.json`.\n";
    }
    if (scenario == "cat-atten") {
        return "# Plotting notes\n\n"
               "`wigner.csv` holds W(x, p) of the attenuated cat state (columns `x,p,w`).\n"
               "`--mode ordinary` gives the traced output with damped fringes, `--mode heralded` the\n"
               "zero-photon-heralded output, and `--mode efficiency --eta E` one panel of the detector\n"
               "efficiency series (E = 1, 0.75, 0.5, 0). `summary.json` compares the negativity with the\n"
               "exact cat state of amplitude keep * alpha.\n";
    }
    if (scenario == "smsv-atten") {
        return "# Plotting notes\n\n"
               "`wigner.csv` holds W(x, p) of the attenuated squeezed vacuum (columns `x,p,w`).\n"
               "`fit.json` holds the Gaussian parameters A, s, sigma of\n"
               "W = A exp(-(s x^2 + p^2 / s) / (2 sigma^2)); `summary.json` also lists the closed-form\n"
               "prediction for ordinary and heralded attenuation.\n";
    }
    if (scenario == "mzi-sweep") {
        return "# Plotting notes\n\n"
               "`curve.csv` holds the (1,1) coincidence probability per accepted event against the phase\n"
               "shift (columns `phi,p_coincidence`). Overlay the `--mode ordinary` and `--mode heralded`\n"
               "runs to compare the interference visibility recorded in `summary.json`.\n";
    }
    return "# Plotting notes\n\n"
           "`efficiency.csv` holds the interference visibility against the heralding detector\n"
           "efficiency (columns `eta,visibility`). Plot visibility against eta.\n";
}

}  // namespace

const std::vector<std::string> &scenario_names() {
    static const std::vector<std::string> names{"wigner", "cat-atten", "smsv-atten", "mzi-sweep", "eta-sweep"};
    return names;
}

ScenarioConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot read config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ParameterError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParameterError("config file must hold a JSON object");
    }
    ScenarioConfig config;
    for (const auto &[key, value] : doc.items()) {
        if (key == "scenario" && value.is_string()) {
            config.scenario = value.get<std::string>();
        } else if (key == "parameters" && value.is_object()) {
            config.parameters = value;
        } else if (key == "output" && value.is_string()) {
            config.output = value.get<std::string>();
        } else if (key == "grid" && value.is_string()) {
            config.grid = value.get<std::string>();
        } else {
            throw ParameterError("config file: unknown or mistyped key '" + key + "'");
        }
    }
    return config;
}

ScenarioConfig merge(ScenarioConfig base, const ScenarioConfig &overrides) {
    if (!overrides.scenario.empty()) {
        base.scenario = overrides.scenario;
    }
    for (const auto &[key, value] : overrides.parameters.items()) {
        base.parameters[key] = value;
    }
    if (!overrides.output.empty()) {
        base.output = overrides.output;
    }
    if (overrides.grid) {
        base.grid = overrides.grid;
    }
    return base;
}

std::vector<std::string> validate(const ScenarioConfig &config) {
    std::vector<std::string> diagnostics;
    resolve(config, diagnostics);
    return diagnostics;
}

json resolved_parameters(const ScenarioConfig &config) {
    std::vector<std::string> diagnostics;
    const Resolved r = resolve(config, diagnostics);
    if (!diagnostics.empty()) {
        throw ParameterError(diagnostics.front());
    }
    return to_json(r, config);
}

Artifacts compute(const ScenarioConfig &config) {
    std::vector<std::string> diagnostics;
    const Resolved r = resolve(config, diagnostics);
    if (!diagnostics.empty()) {
        throw ParameterError(diagnostics.front());
    }
    json summary{{"tool", kToolName},
                 {"version", kToolVersion},
                 {"scenario", config.scenario},
                 {"config", to_json(r, config)}};
    json results;
    Artifacts files;
    const auto grid = PhaseSpaceGrid::uniform(r.grid.min, r.grid.max, r.grid.points);

    if (config.scenario == "wigner") {
        FockKet ket = r.state == "cat"        ? even_cat(r.alpha, r.cutoff)
                      : r.state == "coherent" ? coherent(r.alpha, r.cutoff)
                                              : smsv(r.xi, r.cutoff);
        const WignerGrid w = wigner_pure(ket, grid);
        results = wigner_summary(w);
        results["mean_photon_number"] = mean_photon_number(ket);
        if (r.state == "smsv") {
            const GaussianFit fit = fit_gaussian(w);
            results["fit"] = to_json(fit);
            files["fit.json"] = to_json(fit).dump(2) + "\n";
        }
        files["wigner.csv"] = csv(w);
    } else if (config.scenario == "cat-atten") {
        const auto out = attenuate(even_cat(r.alpha, r.cutoff), r, grid);
        results = wigner_summary(out.wigner);
        results["herald_probability"] = out.probability;
        const WignerGrid reference = wigner_pure(even_cat(r.keep * r.alpha, r.cutoff), grid);
        double diff = 0.0;
        for (std::size_t i = 0; i < reference.values.size(); ++i) {
            diff = std::max(diff, std::abs(reference.values[i] - out.wigner.values[i]));
        }
        results["reference_cat"] = {{"alpha", r.keep * r.alpha},
                                    {"negativity_volume", negativity_volume(reference)},
                                    {"max_abs_difference", diff}};
        files["wigner.csv"] = csv(out.wigner);
    } else if (config.scenario == "smsv-atten") {
        const auto out = attenuate(smsv(r.xi, r.cutoff), r, grid);
        const GaussianFit fit = fit_gaussian(out.wigner);
        results = wigner_summary(out.wigner);
        results["herald_probability"] = out.probability;
        results["fit"] = to_json(fit);
        const double t2 = r.keep * r.keep;
        const HeraldMode mode = parse_mode(r.mode);
        if (mode == HeraldMode::kOrdinary) {
            // Loss channel on the quadrature variances: V' = t^2 V + (1 - t^2) / 2.
            const double vx = t2 * std::exp(-2.0 * r.xi) / 2.0 + (1.0 - t2) / 2.0;
            const double vp = t2 * std::exp(2.0 * r.xi) / 2.0 + (1.0 - t2) / 2.0;
            results["prediction"] = {{"s", std::sqrt(vp / vx)}, {"sigma", std::pow(vx * vp, 0.25)}};
        } else if (mode == HeraldMode::kHeralded) {
            // nu^n maps tanh(xi) to nu^2 tanh(xi); the state stays minimum-uncertainty.
            const double xi_out = std::atanh(t2 * std::tanh(r.xi));
            results["prediction"] = {{"s", std::exp(2.0 * xi_out)}, {"sigma", std::sqrt(0.5)}};
        }
        files["wigner.csv"] = csv(out.wigner);
        files["fit.json"] = to_json(fit).dump(2) + "\n";
    } else if (config.scenario == "mzi-sweep") {
        const InterferenceCurve curve = phase_sweep(mzi_config(r));
        std::string text = "phi,p_coincidence\n";
        for (std::size_t k = 0; k < curve.phi.size(); ++k) {
            text += format_double(curve.phi[k]) + "," + format_double(curve.probability[k]) + "\n";
        }
        const auto [lo, hi] = std::minmax_element(curve.probability.begin(), curve.probability.end());
        results = {{"visibility", visibility(curve)},
                   {"herald_probability", curve.herald_probability},
                   {"max_coincidence", *hi},
                   {"min_coincidence", *lo}};
        files["curve.csv"] = std::move(text);
    } else {
        const auto table = visibility_vs_efficiency(mzi_config(r), r.etas);
        std::string text = "eta,visibility\n";
        json rows = json::array();
        for (const auto &point : table) {
            text += format_double(point.eta) + "," + format_double(point.visibility) + "\n";
            rows.push_back({{"eta", point.eta}, {"visibility", point.visibility}});
        }
        results = {{"visibility_vs_efficiency", rows}};
        files["efficiency.csv"] = std::move(text);
    }
    summary["results"] = results;
    files["summary.json"] = summary.dump(2) + "\n";
    files["plots.md"] = plots_text(config.scenario);
    return files;
}

int run(const ScenarioConfig &config, std::ostream &log) {
    const auto diagnostics = validate(config);
    if (!diagnostics.empty()) {
        for (const auto &d : diagnostics) {
            log << "invalid config: " << d << "\n";
        }
        return kExitInvalidConfig;
    }
    Artifacts files;
    try {
        files = compute(config);
    } catch (const NumericalError &e) {
        log << "numerical validation failed: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::invalid_argument &e) {
        log << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    }

    namespace fs = std::filesystem;
    const fs::path dir = config.output.empty() ? fs::path(".") : config.output;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        log << "cannot create output directory " << dir << ": " << ec.message() << "\n";
        return kExitInvalidConfig;
    }
    std::vector<std::pair<fs::path, fs::path>> staged;
    auto discard = [&] {
        for (const auto &[tmp, final_path] : staged) {
            fs::remove(tmp, ec);
        }
    };
    for (const auto &[name, content] : files) {
        const fs::path tmp = dir / ("." + name + ".tmp");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        staged.emplace_back(tmp, dir / name);
        if (!out) {
            log << "cannot write " << tmp << "\n";
            discard();
            return kExitInvalidConfig;
        }
    }
    for (const auto &[tmp, final_path] : staged) {
        fs::rename(tmp, final_path, ec);
        if (ec) {
            log << "cannot move " << tmp << " into place: " << ec.message() << "\n";
            discard();
            return kExitInvalidConfig;
        }
    }
    for (const auto &[name, content] : files) {
        log << "wrote " << (dir / name).string() << "\n";
    }
    return kExitOk;
}

}  // namespace heraldsim
