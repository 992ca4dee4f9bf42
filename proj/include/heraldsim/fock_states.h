#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace heraldsim {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 20;
inline constexpr int kDefaultMultiModeCutoff = 12;

/// Weight allowed in the top 10% of photon-number indices (and beyond the cutoff).
inline constexpr double kTailTolerance = 1e-6;
/// Allowed deviation of the squared norm from 1 for kets flagged as normalized.
inline constexpr double kNormTolerance = 1e-9;
/// Slack above 1 tolerated for any squared norm or trace.
inline constexpr double kNormSlack = 1e-12;

/// Single-mode pure state in the truncated number basis |0>, ..., |cutoff-1>.
///
/// Kets may be unnormalized (conditional branches of a larger state); the
/// `normalized` flag records whether the squared norm is 1 to kNormTolerance.
class FockKet {
   public:
    FockKet(std::vector<Complex> coeffs, bool normalized);

    static FockKet vacuum(int cutoff);
    static FockKet number_state(int n, int cutoff);

    int cutoff() const { return static_cast<int>(coeffs_.size()); }
    bool normalized() const { return normalized_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    Complex operator[](int n) const { return coeffs_[static_cast<std::size_t>(n)]; }

    double squared_norm() const;

    /// Copy rescaled to unit norm. Throws NumericalError for a null ket.
    FockKet renormalized() const;

   private:
    std::vector<Complex> coeffs_;
    bool normalized_;
};

/// k-mode pure state (k >= 2). Coefficients are stored row-major: the last
/// mode's photon number varies fastest.
class MultiModeKet {
   public:
    MultiModeKet(std::vector<int> cutoffs, std::vector<Complex> coeffs, bool normalized);

    static MultiModeKet vacuum(std::vector<int> cutoffs);
    /// |a> (x) |b>.
    static MultiModeKet product(const FockKet &a, const FockKet &b);

    int modes() const { return static_cast<int>(cutoffs_.size()); }
    std::span<const int> cutoffs() const { return cutoffs_; }
    int cutoff(int mode) const { return cutoffs_[static_cast<std::size_t>(mode)]; }
    bool normalized() const { return normalized_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    /// Distance in the flat coefficient array between consecutive photon numbers of `mode`.
    std::size_t stride(int mode) const;
    std::size_t flat_index(std::span<const int> photons) const;
    Complex at(std::span<const int> photons) const { return coeffs_[flat_index(photons)]; }
    Complex at(std::initializer_list<int> photons) const;

    double squared_norm() const;
    MultiModeKet renormalized() const;

   private:
    std::vector<int> cutoffs_;
    std::vector<Complex> coeffs_;
    bool normalized_;
};

/// Hermitian positive semidefinite operator on one or two modes, possibly
/// with trace below 1 (a heralded branch before renormalization).
class DensityOperator {
   public:
    /// Validates Hermiticity, positivity and the trace range.
    DensityOperator(std::vector<int> dims, Eigen::MatrixXcd matrix);

    static DensityOperator pure(const FockKet &ket);
    static DensityOperator pure(const MultiModeKet &ket);

    /// sum_k weights[k] |kets[k]><kets[k]|. PSD by construction, so only the trace is validated.
    static DensityOperator mixture(std::span<const FockKet> kets, std::span<const double> weights);
    static DensityOperator mixture(std::span<const MultiModeKet> kets, std::span<const double> weights);

    int modes() const { return static_cast<int>(dims_.size()); }
    std::span<const int> dims() const { return dims_; }
    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }
    double weight() const { return weight_; }

    /// Joint index of |n1> (single mode) or |n1, n2> (two modes).
    int index(std::span<const int> photons) const;

    /// Copy with unit trace.
    DensityOperator renormalized() const;

    /// <n|rho|n> / weight for every joint basis index.
    std::vector<double> populations() const;

   private:
    struct Trusted {};
    DensityOperator(Trusted, std::vector<int> dims, Eigen::MatrixXcd matrix);

    std::vector<int> dims_;
    Eigen::MatrixXcd matrix_;
    double weight_;
};

// Constructors for the input states. Each validates the truncation: the
// weight in the top 10% of photon-number indices, and the weight lost beyond
// the cutoff, must both stay below kTailTolerance. Results are renormalized
// within the truncated space.

/// Coherent state |alpha> for real alpha.
FockKet coherent(double alpha, int cutoff = kDefaultCutoff);
/// Even cat state (|alpha> + |-alpha>) / norm for real alpha.
FockKet even_cat(double alpha, int cutoff = kDefaultCutoff);
/// Single-mode squeezed vacuum, squeezed along x for xi > 0.
FockKet smsv(double xi, int cutoff = kDefaultCutoff);
/// Two-mode squeezed vacuum sum_n (-tanh xi)^n |n>|n> / cosh xi.
MultiModeKet tmsv(double xi, int cutoff = kDefaultMultiModeCutoff);

/// <a|b>. Throws ShapeError when the cutoffs differ.
Complex overlap(const FockKet &a, const FockKet &b);
Complex overlap(const MultiModeKet &a, const MultiModeKet &b);

/// Mean photon number of the normalized state (the input is renormalized internally).
double mean_photon_number(const FockKet &ket);
double mean_photon_number(const DensityOperator &rho);

/// Trace distance (1/2)||a/tr a - b/tr b||_1 between two operators of equal shape.
double trace_distance(const DensityOperator &a, const DensityOperator &b);

/// log(n!) for n >= 0.
double log_factorial(int n);

// State JSON: {"modes": k, "cutoffs": [...], "coeffs": [[re, im], ...], "normalized": bool}.
nlohmann::json to_json(const FockKet &ket);
nlohmann::json to_json(const MultiModeKet &ket);
FockKet fock_ket_from_json(const nlohmann::json &j);
MultiModeKet multimode_ket_from_json(const nlohmann::json &j);

}  // namespace heraldsim
