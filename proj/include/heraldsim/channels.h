#pragma once

#include <span>
#include <variant>
#include <vector>

#include "heraldsim/fock_states.h"

namespace heraldsim {

/// Lossless two-mode beam splitter acting on creation operators as
///
///   a_in^dag -> t a_out^dag + i r b_out^dag
///   b_in^dag -> i r a_out^dag + t b_out^dag
///
/// Physical devices use t, r in [0, 1]. A negative r is accepted so that the
/// adjoint of a device can be represented by the same type.
struct BeamSplitter {
    double t;
    double r;

    BeamSplitter(double transmissivity, double reflectivity);

    /// Splitter transmitting amplitude `t` and reflecting sqrt(1 - t^2).
    static BeamSplitter from_transmissivity(double t);
    static BeamSplitter balanced();

    BeamSplitter adjoint() const { return BeamSplitter(t, -r); }
};

/// How an auxiliary mode is resolved after it has been coupled to the signal.
enum class HeraldMode {
    kOrdinary,    ///< discarded (partial trace)
    kHeralded,    ///< accepted only when an ideal detector sees zero photons
    kEfficiency,  ///< accepted when a detector of efficiency eta does not click
};

/// Relative acceptance weight of the branch with `photons` photons in the auxiliary mode.
double herald_weight(HeraldMode mode, double eta, int photons);

/// Post-selected state together with its success probability. The state is normalized.
struct HeraldOutcome {
    std::variant<FockKet, DensityOperator> state;
    double probability;

    const FockKet &ket() const { return std::get<FockKet>(state); }
    const DensityOperator &density() const { return std::get<DensityOperator>(state); }
};

/// Sends `ket` into the first port of `bs` with vacuum in the second. Both
/// output modes keep the input cutoff, which is exact for a passive device.
MultiModeKet inject(const FockKet &ket, const BeamSplitter &bs);

/// Closed-form output coefficient c(n_a, n_b) for an even cat state of real amplitude alpha.
Complex cat_split_coefficient(double alpha, const BeamSplitter &bs, int n_a, int n_b);

/// Closed-form output coefficient c(n_a, n_b) for a squeezed vacuum with parameter xi.
Complex smsv_split_coefficient(double xi, const BeamSplitter &bs, int n_a, int n_b);

/// Applies `bs` to modes (mode_i, mode_j) of a register, mode_i taking the
/// role of the a port. Throws TruncationError if more than 1e-12 of the
/// squared norm would leave the register's truncated basis.
MultiModeKet apply_bs(const MultiModeKet &state, int mode_i, int mode_j, const BeamSplitter &bs);

/// Multiplies every coefficient by exp(i n phi), n the photon number of `mode`.
MultiModeKet phase_shift(const MultiModeKet &state, int mode, double phi);
FockKet phase_shift(const FockKet &state, double phi);

/// Copy of `state` in a register with larger (or equal) per-mode cutoffs.
MultiModeKet widen(const MultiModeKet &state, std::vector<int> cutoffs);

/// Adds a vacuum mode at the end of the register (or builds |ket>|0>).
MultiModeKet append_vacuum(const MultiModeKet &state, int cutoff);
MultiModeKet append_vacuum(const FockKet &state, int cutoff);

/// Projects `mode` onto |photons> and removes it from the register, without
/// renormalization. The register must keep at least two modes.
MultiModeKet project(const MultiModeKet &state, int mode, int photons);

/// Unnormalized conditional ket of mode a given n_b photons in mode b of a two-mode state.
FockKet branch(const MultiModeKet &two_mode, int n_b);

/// Reduced density operator after tracing out `mode`. The remaining register
/// must have one or two modes.
DensityOperator trace_out(const MultiModeKet &state, int mode);

/// Keeps mode a of a two-mode state when mode b holds zero photons.
/// Throws HeraldError when the success probability is below 1e-15.
HeraldOutcome herald_zero(const MultiModeKet &two_mode);

/// Applies nu^n to `ket` and renormalizes; probability is the squared norm before renormalization.
HeraldOutcome nu_to_n(const FockKet &ket, double nu);

/// Keeps mode a of a two-mode state when a detector of efficiency eta on
/// mode b does not click.
HeraldOutcome herald_noclick(const MultiModeKet &two_mode, double eta);

}  // namespace heraldsim
