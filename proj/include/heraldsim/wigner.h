#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "heraldsim/fock_states.h"
#include "json.hpp"

namespace heraldsim {

/// Largest cutoff accepted by the number-basis Wigner kernel.
inline constexpr int kMaxWignerCutoff = 60;

/// Rectangular, uniformly spaced phase-space grid (hbar = 1, vacuum variance 1/2).
class PhaseSpaceGrid {
   public:
    PhaseSpaceGrid(std::vector<double> x, std::vector<double> p);

    /// Same `points` samples of [min, max] on both axes.
    static PhaseSpaceGrid uniform(double min, double max, int points);
    /// x, p in [-5, 5] with 201 points per axis.
    static PhaseSpaceGrid standard();

    std::span<const double> x() const { return x_; }
    std::span<const double> p() const { return p_; }
    double dx() const { return x_[1] - x_[0]; }
    double dp() const { return p_[1] - p_[0]; }
    std::size_t size() const { return x_.size() * p_.size(); }

    /// Trapezoidal weight of grid point (i, j).
    double weight(std::size_t i, std::size_t j) const;

   private:
    std::vector<double> x_;
    std::vector<double> p_;
};

/// W(x_i, p_j) stored row-major: index i * p.size() + j.
struct WignerGrid {
    PhaseSpaceGrid grid;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * grid.p().size() + j]; }
    /// Trapezoidal integral of `f(x, p) * W(x, p)`.
    template <typename F>
    double integrate(F &&f) const {
        double total = 0.0;
        const auto x = grid.x();
        const auto p = grid.p();
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                total += grid.weight(i, j) * f(x[i], p[j]) * at(i, j);
            }
        }
        return total;
    }
    double integral() const;
    double min_value() const;
};

/// Parameters of W = A exp(-(s x^2 + p^2 / s) / (2 sigma^2)).
struct GaussianFit {
    double amplitude;
    double s;
    double sigma;

    double operator()(double x, double p) const;
};

/// Harmonic-oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2).
double oscillator_wavefunction(int n, double x);
/// psi_0(x), ..., psi_{count-1}(x) from the normalized three-term recurrence.
std::vector<double> oscillator_wavefunctions(int count, double x);

/// Wigner function of a (possibly unnormalized) pure state; integrates to its squared norm.
WignerGrid wigner_pure(const FockKet &ket, const PhaseSpaceGrid &grid);

/// Sum of the branch Wigner functions, each scaled by its weight (1 when omitted).
WignerGrid wigner_mixed(std::span<const FockKet> branches, const PhaseSpaceGrid &grid);
WignerGrid wigner_mixed(std::span<const FockKet> branches, std::span<const double> weights,
                        const PhaseSpaceGrid &grid);
/// Wigner function of a single-mode density operator; integrates to its trace.
WignerGrid wigner_mixed(const DensityOperator &rho, const PhaseSpaceGrid &grid);

/// Moment-based fit of the centered Gaussian form. Rejects grids whose mean
/// position exceeds 0.05 in either quadrature or whose variances are not positive.
GaussianFit fit_gaussian(const WignerGrid &w);

/// Largest |W - fit| over the grid.
double max_residual(const WignerGrid &w, const GaussianFit &fit);

/// Integral of the negative part of W.
double negativity_volume(const WignerGrid &w);

/// CSV with header `x,p,w`, rows ordered by x then p, `%.12e` values.
void write_csv(std::ostream &out, const WignerGrid &w);

nlohmann::json to_json(const GaussianFit &fit);

}  // namespace heraldsim
