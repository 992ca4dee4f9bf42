#include "heraldsim/fock_states.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "heraldsim/errors.h"

namespace heraldsim {

namespace {

double sum_squares(std::span<const Complex> coeffs) {
    double total = 0.0;
    for (const auto &c : coeffs) {
        total += std::norm(c);
    }
    return total;
}

void check_norm(double norm2, bool normalized, const char *what) {
    if (!(norm2 >= 0.0) || norm2 > 1.0 + kNormSlack) {
        std::ostringstream msg;
        msg << what << ": squared norm " << norm2 << " exceeds 1";
        throw NumericalError(msg.str());
    }
    if (normalized && std::abs(norm2 - 1.0) >= kNormTolerance) {
        std::ostringstream msg;
        msg << what << ": flagged normalized but squared norm is " << norm2;
        throw NumericalError(msg.str());
    }
}

int tail_count(int cutoff) {
    return std::max(1, (cutoff + 9) / 10);
}

// `probs` are the untruncated-formula weights |c_n|^2 for n < cutoff.
void check_truncation(std::span<const double> probs, const char *what) {
    const int cutoff = static_cast<int>(probs.size());
    const double kept = std::accumulate(probs.begin(), probs.end(), 0.0);
    const double lost = std::max(0.0, 1.0 - kept);
    double top = 0.0;
    for (int n = cutoff - tail_count(cutoff); n < cutoff; ++n) {
        top += probs[static_cast<std::size_t>(n)];
    }
    if (top >= kTailTolerance || lost >= kTailTolerance) {
        std::ostringstream msg;
        msg << what << ": cutoff " << cutoff << " too small (weight in top indices " << top
            << ", weight beyond cutoff " << lost << ")";
        throw TruncationError(msg.str());
    }
}

void check_cutoff(int cutoff, int minimum, const char *what) {
    if (cutoff < minimum) {
        throw ParameterError(std::string(what) + ": cutoff must be at least " + std::to_string(minimum));
    }
}

void check_finite(double value, const char *what) {
    if (!std::isfinite(value)) {
        throw ParameterError(std::string(what) + ": parameter must be finite");
    }
}

// log cosh(x), safe for large |x|.
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

FockKet finish(std::vector<double> log_mag, std::vector<int> sign, const char *what) {
    const std::size_t cutoff = log_mag.size();
    std::vector<double> probs(cutoff);
    std::vector<Complex> coeffs(cutoff);
    for (std::size_t n = 0; n < cutoff; ++n) {
        if (sign[n] == 0) {
            continue;
        }
        const double mag = std::exp(log_mag[n]);
        probs[n] = mag * mag;
        coeffs[n] = Complex(sign[n] * mag, 0.0);
    }
    check_truncation(probs, what);
    return FockKet(std::move(coeffs), false).renormalized();
}

}  // namespace

double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// ---------------------------------------------------------------------------
// FockKet

FockKet::FockKet(std::vector<Complex> coeffs, bool normalized)
    : coeffs_(std::move(coeffs)), normalized_(normalized) {
    if (coeffs_.empty()) {
        throw ParameterError("FockKet: cutoff must be positive");
    }
    check_norm(squared_norm(), normalized_, "FockKet");
}

FockKet FockKet::vacuum(int cutoff) {
    return number_state(0, cutoff);
}

FockKet FockKet::number_state(int n, int cutoff) {
    check_cutoff(cutoff, 1, "number_state");
    if (n < 0 || n >= cutoff) {
        throw std::out_of_range("number_state: photon number outside the truncated basis");
    }
    std::vector<Complex> coeffs(static_cast<std::size_t>(cutoff));
    coeffs[static_cast<std::size_t>(n)] = 1.0;
    return FockKet(std::move(coeffs), true);
}

double FockKet::squared_norm() const {
    return sum_squares(coeffs_);
}

FockKet FockKet::renormalized() const {
    const double norm2 = squared_norm();
    if (norm2 <= 0.0) {
        throw NumericalError("FockKet: cannot renormalize a null ket");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    std::vector<Complex> out(coeffs_);
    for (auto &c : out) {
        c *= scale;
    }
    return FockKet(std::move(out), true);
}

// ---------------------------------------------------------------------------
// MultiModeKet

MultiModeKet::MultiModeKet(std::vector<int> cutoffs, std::vector<Complex> coeffs, bool normalized)
    : cutoffs_(std::move(cutoffs)), coeffs_(std::move(coeffs)), normalized_(normalized) {
    if (cutoffs_.size() < 2) {
        throw ShapeError("MultiModeKet: at least two modes required");
    }
    std::size_t total = 1;
    for (int c : cutoffs_) {
        if (c < 1) {
            throw ParameterError("MultiModeKet: cutoffs must be positive");
        }
        total *= static_cast<std::size_t>(c);
    }
    if (total != coeffs_.size()) {
        throw ShapeError("MultiModeKet: coefficient count does not match the product of cutoffs");
    }
    check_norm(squared_norm(), normalized_, "MultiModeKet");
}

MultiModeKet MultiModeKet::vacuum(std::vector<int> cutoffs) {
    std::size_t total = 1;
    for (int c : cutoffs) {
        total *= static_cast<std::size_t>(std::max(c, 0));
    }
    std::vector<Complex> coeffs(total);
    if (total > 0) {
        coeffs[0] = 1.0;
    }
    return MultiModeKet(std::move(cutoffs), std::move(coeffs), true);
}

MultiModeKet MultiModeKet::product(const FockKet &a, const FockKet &b) {
    std::vector<Complex> coeffs;
    coeffs.reserve(static_cast<std::size_t>(a.cutoff() * b.cutoff()));
    for (const auto &ca : a.coeffs()) {
        for (const auto &cb : b.coeffs()) {
            coeffs.push_back(ca * cb);
        }
    }
    return MultiModeKet({a.cutoff(), b.cutoff()}, std::move(coeffs), a.normalized() && b.normalized());
}

std::size_t MultiModeKet::stride(int mode) const {
    if (mode < 0 || mode >= modes()) {
        throw std::out_of_range("MultiModeKet: mode index out of range");
    }
    std::size_t s = 1;
    for (int m = modes() - 1; m > mode; --m) {
        s *= static_cast<std::size_t>(cutoffs_[static_cast<std::size_t>(m)]);
    }
    return s;
}

std::size_t MultiModeKet::flat_index(std::span<const int> photons) const {
    if (static_cast<int>(photons.size()) != modes()) {
        throw ShapeError("MultiModeKet: index arity does not match the mode count");
    }
    std::size_t flat = 0;
    for (std::size_t m = 0; m < photons.size(); ++m) {
        if (photons[m] < 0 || photons[m] >= cutoffs_[m]) {
            throw std::out_of_range("MultiModeKet: photon number outside the truncated basis");
        }
        flat = flat * static_cast<std::size_t>(cutoffs_[m]) + static_cast<std::size_t>(photons[m]);
    }
    return flat;
}

Complex MultiModeKet::at(std::initializer_list<int> photons) const {
    return at(std::span<const int>(photons.begin(), photons.size()));
}

double MultiModeKet::squared_norm() const {
    return sum_squares(coeffs_);
}

MultiModeKet MultiModeKet::renormalized() const {
    const double norm2 = squared_norm();
    if (norm2 <= 0.0) {
        throw NumericalError("MultiModeKet: cannot renormalize a null ket");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    std::vector<Complex> out(coeffs_);
    for (auto &c : out) {
        c *= scale;
    }
    return MultiModeKet(cutoffs_, std::move(out), true);
}

// ---------------------------------------------------------------------------
// DensityOperator

namespace {

int checked_dimension(std::span<const int> dims) {
    if (dims.empty() || dims.size() > 2) {
        throw ShapeError("DensityOperator: only one or two modes are supported");
    }
    int total = 1;
    for (int d : dims) {
        if (d < 1) {
            throw ParameterError("DensityOperator: dimensions must be positive");
        }
        total *= d;
    }
    return total;
}

double checked_weight(const Eigen::MatrixXcd &m) {
    const double weight = m.trace().real();
    if (!(weight > 0.0) || weight > 1.0 + kNormSlack) {
        std::ostringstream msg;
        msg << "DensityOperator: trace " << weight << " outside (0, 1]";
        throw NumericalError(msg.str());
    }
    return weight;
}

}  // namespace

DensityOperator::DensityOperator(std::vector<int> dims, Eigen::MatrixXcd matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    const int dim = checked_dimension(dims_);
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw ShapeError("DensityOperator: matrix size does not match the mode dimensions");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw NumericalError("DensityOperator: matrix is not Hermitian");
    }
    weight_ = checked_weight(matrix_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw NumericalError("DensityOperator: matrix has a negative eigenvalue");
    }
}

DensityOperator::DensityOperator(Trusted, std::vector<int> dims, Eigen::MatrixXcd matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    checked_dimension(dims_);
    weight_ = checked_weight(matrix_);
}

namespace {

Eigen::VectorXcd as_vector(std::span<const Complex> coeffs) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = coeffs[i];
    }
    return v;
}

}  // namespace

DensityOperator DensityOperator::pure(const FockKet &ket) {
    const double one = 1.0;
    return mixture(std::span<const FockKet>(&ket, 1), std::span<const double>(&one, 1));
}

DensityOperator DensityOperator::pure(const MultiModeKet &ket) {
    const double one = 1.0;
    return mixture(std::span<const MultiModeKet>(&ket, 1), std::span<const double>(&one, 1));
}

DensityOperator DensityOperator::mixture(std::span<const FockKet> kets, std::span<const double> weights) {
    if (kets.empty() || kets.size() != weights.size()) {
        throw ShapeError("DensityOperator::mixture: need one weight per ket");
    }
    const int dim = kets.front().cutoff();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < kets.size(); ++k) {
        if (kets[k].cutoff() != dim) {
            throw ShapeError("DensityOperator::mixture: kets have different cutoffs");
        }
        if (weights[k] < 0.0) {
            throw ParameterError("DensityOperator::mixture: negative weight");
        }
        if (weights[k] == 0.0) {
            continue;
        }
        const Eigen::VectorXcd v = as_vector(kets[k].coeffs());
        m.noalias() += weights[k] * (v * v.adjoint());
    }
    return DensityOperator(Trusted{}, {dim}, std::move(m));
}

DensityOperator DensityOperator::mixture(std::span<const MultiModeKet> kets, std::span<const double> weights) {
    if (kets.empty() || kets.size() != weights.size()) {
        throw ShapeError("DensityOperator::mixture: need one weight per ket");
    }
    const auto c = kets.front().cutoffs();
    std::vector<int> dims(c.begin(), c.end());
    const int dim = checked_dimension(dims);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < kets.size(); ++k) {
        if (!std::ranges::equal(kets[k].cutoffs(), c)) {
            throw ShapeError("DensityOperator::mixture: kets have different cutoffs");
        }
        if (weights[k] < 0.0) {
            throw ParameterError("DensityOperator::mixture: negative weight");
        }
        if (weights[k] == 0.0) {
            continue;
        }
        const Eigen::VectorXcd v = as_vector(kets[k].coeffs());
        m.noalias() += weights[k] * (v * v.adjoint());
    }
    return DensityOperator(Trusted{}, std::move(dims), std::move(m));
}

int DensityOperator::index(std::span<const int> photons) const {
    if (photons.size() != dims_.size()) {
        throw ShapeError("DensityOperator: index arity does not match the mode count");
    }
    int flat = 0;
    for (std::size_t m = 0; m < photons.size(); ++m) {
        if (photons[m] < 0 || photons[m] >= dims_[m]) {
            throw std::out_of_range("DensityOperator: photon number outside the truncated basis");
        }
        flat = flat * dims_[m] + photons[m];
    }
    return flat;
}

DensityOperator DensityOperator::renormalized() const {
    return DensityOperator(Trusted{}, dims_, matrix_ / weight_);
}

std::vector<double> DensityOperator::populations() const {
    std::vector<double> out(static_cast<std::size_t>(dimension()));
    for (int i = 0; i < dimension(); ++i) {
        out[static_cast<std::size_t>(i)] = matrix_(i, i).real() / weight_;
    }
    return out;
}

// ---------------------------------------------------------------------------
// State constructors

FockKet coherent(double alpha, int cutoff) {
    check_finite(alpha, "coherent");
    check_cutoff(cutoff, 1, "coherent");
    std::vector<double> log_mag(static_cast<std::size_t>(cutoff));
    std::vector<int> sign(static_cast<std::size_t>(cutoff));
    const double a = std::abs(alpha);
    for (int n = 0; n < cutoff; ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (a == 0.0) {
            sign[i] = n == 0 ? 1 : 0;
            continue;
        }
        log_mag[i] = -0.5 * a * a + n * std::log(a) - 0.5 * log_factorial(n);
        sign[i] = (alpha < 0.0 && n % 2 == 1) ? -1 : 1;
    }
    return finish(std::move(log_mag), std::move(sign), "coherent");
}

FockKet even_cat(double alpha, int cutoff) {
    check_finite(alpha, "even_cat");
    check_cutoff(cutoff, 1, "even_cat");
    std::vector<double> log_mag(static_cast<std::size_t>(cutoff));
    std::vector<int> sign(static_cast<std::size_t>(cutoff));
    const double a = std::abs(alpha);
    const double log_norm = 0.5 * log_cosh(a * a);
    for (int n = 0; n < cutoff; n += 2) {
        const auto i = static_cast<std::size_t>(n);
        if (a == 0.0) {
            sign[i] = n == 0 ? 1 : 0;
            continue;
        }
        log_mag[i] = n * std::log(a) - 0.5 * log_factorial(n) - log_norm;
        sign[i] = 1;
    }
    return finish(std::move(log_mag), std::move(sign), "even_cat");
}

FockKet smsv(double xi, int cutoff) {
    check_finite(xi, "smsv");
    check_cutoff(cutoff, 2, "smsv");
    std::vector<double> log_mag(static_cast<std::size_t>(cutoff));
    std::vector<int> sign(static_cast<std::size_t>(cutoff));
    const double tanh_xi = std::tanh(xi);
    const double log_norm = 0.5 * log_cosh(xi);
    for (int n = 0; 2 * n < cutoff; ++n) {
        const auto i = static_cast<std::size_t>(2 * n);
        if (tanh_xi == 0.0) {
            sign[i] = n == 0 ? 1 : 0;
            continue;
        }
        // sqrt(binomial(2n, n)) * (tanh xi / 2)^n / sqrt(cosh xi)
        log_mag[i] = 0.5 * (log_factorial(2 * n) - 2.0 * log_factorial(n)) +
                     n * std::log(std::abs(tanh_xi) / 2.0) - log_norm;
        // (-tanh xi)^n
        sign[i] = ((tanh_xi > 0.0) && n % 2 == 1) ? -1 : 1;
    }
    return finish(std::move(log_mag), std::move(sign), "smsv");
}

MultiModeKet tmsv(double xi, int cutoff) {
    check_finite(xi, "tmsv");
    check_cutoff(cutoff, 1, "tmsv");
    const double tanh_xi = std::tanh(xi);
    const double log_norm = log_cosh(xi);
    std::vector<double> probs(static_cast<std::size_t>(cutoff));
    std::vector<Complex> coeffs(static_cast<std::size_t>(cutoff) * static_cast<std::size_t>(cutoff));
    for (int n = 0; n < cutoff; ++n) {
        double amp = 0.0;
        if (n == 0) {
            amp = std::exp(-log_norm);
        } else if (tanh_xi != 0.0) {
            amp = std::exp(n * std::log(std::abs(tanh_xi)) - log_norm);
            if (tanh_xi > 0.0 && n % 2 == 1) {
                amp = -amp;
            }
        }
        probs[static_cast<std::size_t>(n)] = amp * amp;
        coeffs[static_cast<std::size_t>(n) * static_cast<std::size_t>(cutoff + 1)] = amp;
    }
    // Both reduced photon-number distributions equal `probs`.
    check_truncation(probs, "tmsv");
    return MultiModeKet({cutoff, cutoff}, std::move(coeffs), false).renormalized();
}

// ---------------------------------------------------------------------------
// Measurements

Complex overlap(const FockKet &a, const FockKet &b) {
    if (a.cutoff() != b.cutoff()) {
        throw ShapeError("overlap: cutoffs differ");
    }
    Complex total = 0.0;
    for (int n = 0; n < a.cutoff(); ++n) {
        total += std::conj(a[n]) * b[n];
    }
    return total;
}

Complex overlap(const MultiModeKet &a, const MultiModeKet &b) {
    if (!std::ranges::equal(a.cutoffs(), b.cutoffs())) {
        throw ShapeError("overlap: mode counts or cutoffs differ");
    }
    Complex total = 0.0;
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        total += std::conj(ca[i]) * cb[i];
    }
    return total;
}

double mean_photon_number(const FockKet &ket) {
    const double norm2 = ket.squared_norm();
    if (norm2 <= 0.0) {
        throw NumericalError("mean_photon_number: null ket");
    }
    double total = 0.0;
    for (int n = 0; n < ket.cutoff(); ++n) {
        total += n * std::norm(ket[n]);
    }
    return total / norm2;
}

double mean_photon_number(const DensityOperator &rho) {
    if (rho.modes() != 1) {
        throw ShapeError("mean_photon_number: single-mode operator required");
    }
    const auto pops = rho.populations();
    double total = 0.0;
    for (std::size_t n = 0; n < pops.size(); ++n) {
        total += static_cast<double>(n) * pops[n];
    }
    return total;
}

double trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (!std::ranges::equal(a.dims(), b.dims())) {
        throw ShapeError("trace_distance: operators have different shapes");
    }
    const Eigen::MatrixXcd diff = a.matrix() / a.weight() - b.matrix() / b.weight();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json coeffs_to_json(std::span<const Complex> coeffs) {
    auto out = nlohmann::json::array();
    for (const auto &c : coeffs) {
        out.push_back({c.real(), c.imag()});
    }
    return out;
}

std::vector<Complex> coeffs_from_json(const nlohmann::json &j) {
    std::vector<Complex> out;
    for (const auto &pair : j.at("coeffs")) {
        if (!pair.is_array() || pair.size() != 2) {
            throw ShapeError("state JSON: each coefficient must be a [re, im] pair");
        }
        out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const FockKet &ket) {
    return {{"modes", 1},
            {"cutoffs", {ket.cutoff()}},
            {"coeffs", coeffs_to_json(ket.coeffs())},
            {"normalized", ket.normalized()}};
}

nlohmann::json to_json(const MultiModeKet &ket) {
    return {{"modes", ket.modes()},
            {"cutoffs", std::vector<int>(ket.cutoffs().begin(), ket.cutoffs().end())},
            {"coeffs", coeffs_to_json(ket.coeffs())},
            {"normalized", ket.normalized()}};
}

FockKet fock_ket_from_json(const nlohmann::json &j) {
    const auto cutoffs = j.at("cutoffs").get<std::vector<int>>();
    if (j.at("modes").get<int>() != 1 || cutoffs.size() != 1) {
        throw ShapeError("state JSON: expected a single-mode state");
    }
    auto coeffs = coeffs_from_json(j);
    if (static_cast<int>(coeffs.size()) != cutoffs[0]) {
        throw ShapeError("state JSON: coefficient count does not match the cutoff");
    }
    return FockKet(std::move(coeffs), j.at("normalized").get<bool>());
}

MultiModeKet multimode_ket_from_json(const nlohmann::json &j) {
    auto cutoffs = j.at("cutoffs").get<std::vector<int>>();
    if (j.at("modes").get<int>() != static_cast<int>(cutoffs.size())) {
        throw ShapeError("state JSON: mode count does not match the cutoff list");
    }
    return MultiModeKet(std::move(cutoffs), coeffs_from_json(j), j.at("normalized").get<bool>());
}

}  // namespace heraldsim
