#include "heraldsim/wigner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "heraldsim/errors.h"

namespace heraldsim {

namespace {

void check_axis(const std::vector<double> &axis, const char *name) {
    if (axis.size() < 3) {
        throw ParameterError(std::string("PhaseSpaceGrid: ") + name + " needs at least 3 points");
    }
    const double step = axis[1] - axis[0];
    if (!(step > 0.0)) {
        throw ParameterError(std::string("PhaseSpaceGrid: ") + name + " must be ascending");
    }
    const double tolerance = 1e-12 * std::max(1.0, std::abs(axis.back() - axis.front()));
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (std::abs((axis[i] - axis[i - 1]) - step) > tolerance) {
            throw ParameterError(std::string("PhaseSpaceGrid: ") + name + " must be uniformly spaced");
        }
    }
}

double trapezoid_weight(std::size_t i, std::size_t count, double step) {
    return (i == 0 || i + 1 == count) ? 0.5 * step : step;
}

// Evaluates sum_{m,n} rho(m, n) W_{|m><n|}(x, p) for every grid point, where
// rho(m, n) is supplied by `entry`. W_{|n+k><n|} uses the associated Laguerre
// form (1/pi) e^{-r^2} (-1)^n sqrt(n!/(n+k)!) (sqrt2 (x - i p))^k L_n^k(2 r^2).
template <typename Entry>
WignerGrid evaluate(int dim, Entry &&entry, const PhaseSpaceGrid &grid) {
    if (dim > kMaxWignerCutoff) {
        std::ostringstream msg;
        msg << "Wigner kernel supports cutoffs up to " << kMaxWignerCutoff << ", got " << dim;
        throw ParameterError(msg.str());
    }
    const auto xs = grid.x();
    const auto ps = grid.p();
    WignerGrid out{grid, std::vector<double>(grid.size())};

    // Cache the matrix entries below and above the diagonal, offset by k.
    std::vector<std::vector<Complex>> lower(static_cast<std::size_t>(dim));
    std::vector<std::vector<Complex>> upper(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        for (int n = 0; n + k < dim; ++n) {
            lower[static_cast<std::size_t>(k)].push_back(entry(n + k, n));
            upper[static_cast<std::size_t>(k)].push_back(entry(n, n + k));
        }
    }
    std::vector<double> log_fact_sqrt(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        log_fact_sqrt[static_cast<std::size_t>(k)] = 0.5 * log_factorial(k);
    }

    double worst_imag = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const double x = xs[i];
            const double p = ps[j];
            const double r2 = x * x + p * p;
            const double radius = std::sqrt(r2);
            const double u = 2.0 * r2;
            const Complex unit = radius > 0.0 ? Complex(x, -p) / radius : Complex(1.0, 0.0);
            Complex rotation = 1.0;
            Complex total = 0.0;
            for (int k = 0; k < dim; ++k) {
                if (k > 0) {
                    rotation *= unit;
                    if (radius == 0.0) {
                        break;
                    }
                }
                const auto &lo = lower[static_cast<std::size_t>(k)];
                const auto &up = upper[static_cast<std::size_t>(k)];
                // sqrt(0!/k!) (sqrt2 r)^k e^{-r^2}
                double factor = std::exp(-log_fact_sqrt[static_cast<std::size_t>(k)] +
                                         (k > 0 ? k * std::log(std::numbers::sqrt2 * radius) : 0.0) - r2);
                double lag_prev = 0.0;
                double lag = 1.0;
                Complex sum_k = 0.0;
                for (int n = 0; n + k < dim; ++n) {
                    if (n == 1) {
                        lag_prev = 1.0;
                        lag = 1.0 + k - u;
                    } else if (n > 1) {
                        const double next = ((2.0 * (n - 1) + 1.0 + k - u) * lag - (n - 1 + k) * lag_prev) / n;
                        lag_prev = lag;
                        lag = next;
                    }
                    if (n > 0) {
                        factor *= std::sqrt(static_cast<double>(n) / static_cast<double>(n + k));
                    }
                    const double kernel = (n % 2 == 0 ? 1.0 : -1.0) * factor * lag;
                    const Complex w = kernel * rotation;
                    const auto idx = static_cast<std::size_t>(n);
                    if (k == 0) {
                        sum_k += lo[idx] * kernel;
                    } else {
                        sum_k += lo[idx] * w + up[idx] * std::conj(w);
                    }
                }
                total += sum_k;
            }
            total /= std::numbers::pi;
            worst_imag = std::max(worst_imag, std::abs(total.imag()));
            out.values[i * ps.size() + j] = total.real();
        }
    }
    if (worst_imag > 1e-10) {
        std::ostringstream msg;
        msg << "Wigner evaluation left an imaginary residue of " << worst_imag;
        throw NumericalError(msg.str());
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

PhaseSpaceGrid::PhaseSpaceGrid(std::vector<double> x, std::vector<double> p) : x_(std::move(x)), p_(std::move(p)) {
    check_axis(x_, "x");
    check_axis(p_, "p");
}

PhaseSpaceGrid PhaseSpaceGrid::uniform(double min, double max, int points) {
    if (points < 3 || !(max > min)) {
        throw ParameterError("PhaseSpaceGrid: need max > min and at least 3 points");
    }
    std::vector<double> axis(static_cast<std::size_t>(points));
    const double step = (max - min) / (points - 1);
    for (int i = 0; i < points; ++i) {
        axis[static_cast<std::size_t>(i)] = min + i * step;
    }
    return PhaseSpaceGrid(axis, axis);
}

PhaseSpaceGrid PhaseSpaceGrid::standard() {
    return uniform(-5.0, 5.0, 201);
}

double PhaseSpaceGrid::weight(std::size_t i, std::size_t j) const {
    return trapezoid_weight(i, x_.size(), dx()) * trapezoid_weight(j, p_.size(), dp());
}

double WignerGrid::integral() const {
    return integrate([](double, double) { return 1.0; });
}

double WignerGrid::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double GaussianFit::operator()(double x, double p) const {
    return amplitude * std::exp(-(s * x * x + p * p / s) / (2.0 * sigma * sigma));
}

// ---------------------------------------------------------------------------
// Wavefunctions

std::vector<double> oscillator_wavefunctions(int count, double x) {
    if (count < 0) {
        throw ParameterError("oscillator_wavefunctions: count must be non-negative");
    }
    std::vector<double> psi(static_cast<std::size_t>(count));
    if (count == 0) {
        return psi;
    }
    // psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}
    psi[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (count > 1) {
        psi[1] = std::numbers::sqrt2 * x * psi[0];
    }
    for (int n = 1; n + 1 < count; ++n) {
        const auto i = static_cast<std::size_t>(n);
        psi[i + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[i] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[i - 1];
    }
    return psi;
}

double oscillator_wavefunction(int n, double x) {
    if (n < 0) {
        throw ParameterError("oscillator_wavefunction: n must be non-negative");
    }
    return oscillator_wavefunctions(n + 1, x).back();
}

// ---------------------------------------------------------------------------
// Wigner functions

WignerGrid wigner_pure(const FockKet &ket, const PhaseSpaceGrid &grid) {
    const auto c = ket.coeffs();
    return evaluate(
        ket.cutoff(),
        [&](int m, int n) { return c[static_cast<std::size_t>(m)] * std::conj(c[static_cast<std::size_t>(n)]); },
        grid);
}

WignerGrid wigner_mixed(std::span<const FockKet> branches, const PhaseSpaceGrid &grid) {
    const std::vector<double> ones(branches.size(), 1.0);
    return wigner_mixed(branches, ones, grid);
}

WignerGrid wigner_mixed(std::span<const FockKet> branches, std::span<const double> weights,
                        const PhaseSpaceGrid &grid) {
    if (branches.empty()) {
        throw ShapeError("wigner_mixed: empty branch list");
    }
    if (branches.size() != weights.size()) {
        throw ShapeError("wigner_mixed: need one weight per branch");
    }
    WignerGrid total{grid, std::vector<double>(grid.size())};
    for (std::size_t b = 0; b < branches.size(); ++b) {
        if (branches[b].cutoff() != branches.front().cutoff()) {
            throw ShapeError("wigner_mixed: branches have different cutoffs");
        }
        if (weights[b] == 0.0) {
            continue;
        }
        const WignerGrid part = wigner_pure(branches[b], grid);
        for (std::size_t i = 0; i < total.values.size(); ++i) {
            total.values[i] += weights[b] * part.values[i];
        }
    }
    return total;
}

WignerGrid wigner_mixed(const DensityOperator &rho, const PhaseSpaceGrid &grid) {
    if (rho.modes() != 1) {
        throw ShapeError("wigner_mixed: single-mode density operator required");
    }
    const auto &m = rho.matrix();
    return evaluate(
        rho.dimension(), [&](int row, int col) { return m(row, col); }, grid);
}

// ---------------------------------------------------------------------------
// Analysis

GaussianFit fit_gaussian(const WignerGrid &w) {
    const double mass = w.integral();
    if (!(mass > 0.0)) {
        throw NumericalError("fit_gaussian: Wigner function does not integrate to a positive weight");
    }
    const double mean_x = w.integrate([](double x, double) { return x; }) / mass;
    const double mean_p = w.integrate([](double, double p) { return p; }) / mass;
    if (std::abs(mean_x) > 0.05 || std::abs(mean_p) > 0.05) {
        std::ostringstream msg;
        msg << "fit_gaussian: distribution is not centered (mean x " << mean_x << ", mean p " << mean_p << ")";
        throw ParameterError(msg.str());
    }
    const double var_x = w.integrate([](double x, double) { return x * x; }) / mass;
    const double var_p = w.integrate([](double, double p) { return p * p; }) / mass;
    if (!(var_x > 0.0) || !(var_p > 0.0)) {
        throw NumericalError("fit_gaussian: non-positive quadrature variance");
    }
    GaussianFit fit{};
    fit.s = std::sqrt(var_p / var_x);
    fit.sigma = std::pow(var_x * var_p, 0.25);
    fit.amplitude = 1.0 / (2.0 * std::numbers::pi * fit.sigma * fit.sigma);
    return fit;
}

double max_residual(const WignerGrid &w, const GaussianFit &fit) {
    double worst = 0.0;
    const auto x = w.grid.x();
    const auto p = w.grid.p();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            worst = std::max(worst, std::abs(w.at(i, j) - fit(x[i], p[j])));
        }
    }
    return worst;
}

double negativity_volume(const WignerGrid &w) {
    double total = 0.0;
    const auto x = w.grid.x();
    const auto p = w.grid.p();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double v = w.at(i, j);
            if (v < 0.0) {
                total -= w.grid.weight(i, j) * v;
            }
        }
    }
    return total;
}

void write_csv(std::ostream &out, const WignerGrid &w) {
    out << "x,p,w\n";
    const auto x = w.grid.x();
    const auto p = w.grid.p();
    char line[96];
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            std::snprintf(line, sizeof(line), "%.12e,%.12e,%.12e\n", x[i], p[j], w.at(i, j));
            out << line;
        }
    }
}

nlohmann::json to_json(const GaussianFit &fit) {
    return {{"A", fit.amplitude}, {"s", fit.s}, {"sigma", fit.sigma}};
}

}  // namespace heraldsim
