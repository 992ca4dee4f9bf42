#include "heraldsim/interferometer.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heraldsim/errors.h"

namespace heraldsim {

namespace {

constexpr int kMaxMziCutoff = 40;

struct Branch {
    double weight;
    MultiModeKet ket;  // unnormalized two-mode register
};

// Two-mode register after both arm attenuators, as a weighted list of
// conditional kets, one per accepted pair of auxiliary photon numbers. Each
// auxiliary mode is resolved as soon as it has been coupled.
std::vector<Branch> attenuated_branches(const MziConfig &config) {
    const int dim = config.register_cutoff();
    MultiModeKet reg = widen(tmsv(config.xi, config.cutoff), {dim, dim});
    reg = apply_bs(reg, 0, 1, BeamSplitter::balanced());

    const auto attenuator = BeamSplitter::from_transmissivity(config.arm_keep);
    std::vector<Branch> branches{{1.0, std::move(reg)}};
    for (int arm = 0; arm < 2; ++arm) {
        std::vector<Branch> next;
        for (const auto &b : branches) {
            const MultiModeKet coupled = apply_bs(append_vacuum(b.ket, dim), arm, 2, attenuator);
            for (int k = 0; k < dim; ++k) {
                const double w = herald_weight(config.mode, config.eta, k);
                if (w == 0.0) {
                    continue;
                }
                MultiModeKet part = project(coupled, 2, k);
                if (part.squared_norm() == 0.0) {
                    continue;
                }
                next.push_back({b.weight * w, std::move(part)});
            }
        }
        branches = std::move(next);
    }
    return branches;
}

double accepted_probability(const std::vector<Branch> &branches) {
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.weight * b.ket.squared_norm();
    }
    if (total < 1e-15) {
        throw HeraldError("interferometer: herald success probability is numerically zero");
    }
    return total;
}

MultiModeKet recombine(const MultiModeKet &ket, int phase_arm, double phi) {
    return apply_bs(phase_shift(ket, phase_arm, phi), 0, 1, BeamSplitter::balanced());
}

}  // namespace

void MziConfig::validate() const {
    if (!std::isfinite(xi)) {
        throw ParameterError("MziConfig: xi must be finite");
    }
    if (!(arm_keep >= 0.0 && arm_keep <= 1.0)) {
        throw ParameterError("MziConfig: arm_keep must lie in [0, 1]");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ParameterError("MziConfig: eta must lie in [0, 1]");
    }
    if (phi_samples < 8) {
        throw ParameterError("MziConfig: at least 8 phase samples are required");
    }
    if (cutoff < 1 || cutoff > kMaxMziCutoff) {
        std::ostringstream msg;
        msg << "MziConfig: cutoff must lie in [1, " << kMaxMziCutoff << "]";
        throw ParameterError(msg.str());
    }
    if (phase_arm != 0 && phase_arm != 1) {
        throw ParameterError("MziConfig: phase_arm must be 0 or 1");
    }
}

MziOutput mzi_output(const MziConfig &config, double phi) {
    config.validate();
    const auto branches = attenuated_branches(config);
    const double probability = accepted_probability(branches);
    std::vector<MultiModeKet> kets;
    std::vector<double> weights;
    for (const auto &b : branches) {
        kets.push_back(recombine(b.ket, config.phase_arm, phi));
        weights.push_back(b.weight / probability);
    }
    return MziOutput{DensityOperator::mixture(kets, weights), probability};
}

double coincidence_probability(const DensityOperator &rho) {
    if (rho.modes() != 2) {
        throw ShapeError("coincidence_probability: two-mode operator required");
    }
    const int idx = rho.index(std::vector<int>{1, 1});
    return rho.matrix()(idx, idx).real() / rho.weight();
}

InterferenceCurve phase_sweep(const MziConfig &config) {
    config.validate();
    const auto branches = attenuated_branches(config);
    const double probability = accepted_probability(branches);
    InterferenceCurve curve;
    curve.herald_probability = probability;
    for (int s = 0; s < config.phi_samples; ++s) {
        const double phi = 2.0 * std::numbers::pi * s / config.phi_samples;
        double coincidence = 0.0;
        for (const auto &b : branches) {
            coincidence += b.weight * std::norm(recombine(b.ket, config.phase_arm, phi).at({1, 1}));
        }
        curve.phi.push_back(phi);
        curve.probability.push_back(coincidence / probability);
    }
    return curve;
}

double visibility(const InterferenceCurve &curve) {
    if (curve.probability.empty()) {
        throw ParameterError("visibility: empty curve");
    }
    const auto [lo, hi] = std::minmax_element(curve.probability.begin(), curve.probability.end());
    if (*hi + *lo == 0.0) {
        return 0.0;
    }
    return (*hi - *lo) / (*hi + *lo);
}

std::vector<EfficiencyPoint> visibility_vs_efficiency(const MziConfig &config, std::span<const double> etas) {
    std::vector<EfficiencyPoint> table;
    for (double eta : etas) {
        MziConfig c = config;
        c.mode = HeraldMode::kEfficiency;
        c.eta = eta;
        table.push_back({eta, visibility(phase_sweep(c))});
    }
    return table;
}

}  // namespace heraldsim
