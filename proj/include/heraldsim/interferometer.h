#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "heraldsim/channels.h"
#include "heraldsim/fock_states.h"

namespace heraldsim {

/// Mach-Zehnder with a two-mode squeezed vacuum input and an attenuator in each arm.
///
/// Pipeline: tmsv(xi) -> balanced splitter -> per-arm attenuator keeping
/// amplitude `arm_keep` -> auxiliary modes resolved per `mode` -> phase phi on
/// `phase_arm` -> balanced splitter -> coincidence detection.
struct MziConfig {
    double xi = 0.5;
    double arm_keep = std::numbers::sqrt2 / 2.0;
    HeraldMode mode = HeraldMode::kHeralded;
    double eta = 1.0;  ///< used in kEfficiency mode only
    int phi_samples = 64;
    /// Photon-number terms kept in the input pair state (per mode).
    int cutoff = 10;
    /// Arm (0 or 1) carrying the phase shift.
    int phase_arm = 1;

    /// Throws ParameterError on the first out-of-range field.
    void validate() const;
    /// Per-mode dimension of the interferometer register: photon number is
    /// bounded by the total 2 (cutoff - 1) of the input.
    int register_cutoff() const { return 2 * cutoff - 1; }
};

/// Normalized output state conditioned on accepted heralds.
struct MziOutput {
    DensityOperator state;
    double herald_probability;
};

struct InterferenceCurve {
    std::vector<double> phi;
    std::vector<double> probability;  ///< per accepted event
    double herald_probability = 1.0;  ///< joint acceptance probability of both arm heralds
};

struct EfficiencyPoint {
    double eta;
    double visibility;
};

MziOutput mzi_output(const MziConfig &config, double phi);

/// <1,1|rho|1,1> for a normalized two-mode operator.
double coincidence_probability(const DensityOperator &rho);

/// Coincidence probability at phi_k = 2 pi k / phi_samples.
InterferenceCurve phase_sweep(const MziConfig &config);

/// (max - min) / (max + min); 0 for an identically zero curve.
double visibility(const InterferenceCurve &curve);

/// One efficiency-mode phase sweep per eta.
std::vector<EfficiencyPoint> visibility_vs_efficiency(const MziConfig &config, std::span<const double> etas);

}  // namespace heraldsim
