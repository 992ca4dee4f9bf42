#include "heraldsim/channels.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "heraldsim/errors.h"

namespace heraldsim {

namespace {

constexpr Complex kI(0.0, 1.0);
constexpr double kMinHeraldProbability = 1e-15;

Complex int_pow(Complex base, int n) {
    Complex out = 1.0;
    for (int k = 0; k < n; ++k) {
        out *= base;
    }
    return out;
}

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

void check_mode(const MultiModeKet &state, int mode, const char *what) {
    if (mode < 0 || mode >= state.modes()) {
        throw std::out_of_range(std::string(what) + ": mode index out of range");
    }
}

// Per-block beam splitter matrices. blocks[N](k, n1) = <k, N-k| U |n1, N-n1>.
std::vector<Eigen::MatrixXcd> bs_blocks(const BeamSplitter &bs, int max_total) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(max_total + 1));
    blocks.push_back(Eigen::MatrixXcd::Ones(1, 1));
    for (int total = 1; total <= max_total; ++total) {
        const Eigen::MatrixXcd &prev = blocks.back();
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(total + 1, total + 1);
        for (int n1 = 0; n1 <= total; ++n1) {
            // U|n1, n2> = (creation of the incremented port) U|previous> / sqrt(count).
            const bool raise_a = n1 > 0;
            const int prev_col = raise_a ? n1 - 1 : 0;
            const double count = raise_a ? n1 : total - n1;
            const Complex to_a = raise_a ? Complex(bs.t) : kI * bs.r;
            const Complex to_b = raise_a ? kI * bs.r : Complex(bs.t);
            for (int k = 0; k <= total; ++k) {
                Complex value = 0.0;
                if (k > 0) {
                    value += to_a * std::sqrt(static_cast<double>(k)) * prev(k - 1, prev_col);
                }
                if (k < total) {
                    value += to_b * std::sqrt(static_cast<double>(total - k)) * prev(k, prev_col);
                }
                next(k, n1) = value / std::sqrt(count);
            }
        }
        blocks.push_back(std::move(next));
    }
    return blocks;
}

struct Slices {
    std::vector<int> cutoffs;                 // remaining register
    std::vector<std::vector<Complex>> parts;  // one vector per photon number of the removed mode
};

Slices slice(const MultiModeKet &state, int mode) {
    Slices out;
    for (int m = 0; m < state.modes(); ++m) {
        if (m != mode) {
            out.cutoffs.push_back(state.cutoff(m));
        }
    }
    const int dim = state.cutoff(mode);
    const std::size_t stride = state.stride(mode);
    const std::size_t rest = state.size() / static_cast<std::size_t>(dim);
    const auto coeffs = state.coeffs();
    out.parts.assign(static_cast<std::size_t>(dim), std::vector<Complex>(rest));
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        const std::size_t n = (flat / stride) % static_cast<std::size_t>(dim);
        const std::size_t outer = flat / (stride * static_cast<std::size_t>(dim));
        const std::size_t inner = flat % stride;
        out.parts[n][outer * stride + inner] = coeffs[flat];
    }
    return out;
}

HeraldOutcome make_outcome(const FockKet &raw) {
    const double probability = raw.squared_norm();
    if (probability < kMinHeraldProbability) {
        std::ostringstream msg;
        msg << "herald success probability " << probability << " is numerically zero";
        throw HeraldError(msg.str());
    }
    return HeraldOutcome{raw.renormalized(), probability};
}

}  // namespace

BeamSplitter::BeamSplitter(double transmissivity, double reflectivity) : t(transmissivity), r(reflectivity) {
    if (!(t >= 0.0 && t <= 1.0) || !(std::abs(r) <= 1.0)) {
        throw ParameterError("BeamSplitter: amplitudes must satisfy 0 <= t <= 1 and |r| <= 1");
    }
    if (std::abs(t * t + r * r - 1.0) > 1e-12) {
        throw ParameterError("BeamSplitter: t^2 + r^2 must equal 1");
    }
}

BeamSplitter BeamSplitter::from_transmissivity(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ParameterError("BeamSplitter: transmissivity must lie in [0, 1]");
    }
    return BeamSplitter(t, std::sqrt(1.0 - t * t));
}

BeamSplitter BeamSplitter::balanced() {
    return BeamSplitter(std::sqrt(0.5), std::sqrt(0.5));
}

double herald_weight(HeraldMode mode, double eta, int photons) {
    switch (mode) {
        case HeraldMode::kOrdinary:
            return 1.0;
        case HeraldMode::kHeralded:
            return photons == 0 ? 1.0 : 0.0;
        case HeraldMode::kEfficiency:
            if (!(eta >= 0.0 && eta <= 1.0)) {
                throw ParameterError("detector efficiency must lie in [0, 1]");
            }
            return std::pow(1.0 - eta, photons);
    }
    return 0.0;
}

MultiModeKet inject(const FockKet &ket, const BeamSplitter &bs) {
    if (!ket.normalized()) {
        throw ParameterError("inject: input ket must be normalized");
    }
    return apply_bs(append_vacuum(ket, ket.cutoff()), 0, 1, bs);
}

Complex cat_split_coefficient(double alpha, const BeamSplitter &bs, int n_a, int n_b) {
    if (n_a < 0 || n_b < 0) {
        throw ParameterError("cat_split_coefficient: photon numbers must be non-negative");
    }
    if ((n_a + n_b) % 2 == 1) {
        return 0.0;
    }
    const double scale =
        std::exp(-0.5 * (log_factorial(n_a) + log_factorial(n_b)) - 0.5 * log_cosh(alpha * alpha));
    return int_pow(bs.t * alpha, n_a) * int_pow(kI * bs.r * alpha, n_b) * scale;
}

Complex smsv_split_coefficient(double xi, const BeamSplitter &bs, int n_a, int n_b) {
    if (n_a < 0 || n_b < 0) {
        throw ParameterError("smsv_split_coefficient: photon numbers must be non-negative");
    }
    if ((n_a + n_b) % 2 == 1) {
        return 0.0;
    }
    const int total = n_a + n_b;
    const int half = total / 2;
    const double tanh_xi = std::tanh(xi);
    // sqrt(-tanh(xi) / 2) on the branch i sqrt(tanh(xi) / 2) for xi > 0.
    const Complex root = tanh_xi >= 0.0 ? Complex(0.0, std::sqrt(tanh_xi / 2.0)) : Complex(std::sqrt(-tanh_xi / 2.0), 0.0);
    const double scale = std::exp(log_factorial(total) - log_factorial(half) -
                                  0.5 * (log_factorial(n_a) + log_factorial(n_b)) - 0.5 * log_cosh(xi));
    return int_pow(bs.t * root, n_a) * int_pow(kI * bs.r * root, n_b) * scale;
}

MultiModeKet apply_bs(const MultiModeKet &state, int mode_i, int mode_j, const BeamSplitter &bs) {
    check_mode(state, mode_i, "apply_bs");
    check_mode(state, mode_j, "apply_bs");
    if (mode_i == mode_j) {
        throw std::out_of_range("apply_bs: the two modes must differ");
    }
    const int ci = state.cutoff(mode_i);
    const int cj = state.cutoff(mode_j);
    const auto blocks = bs_blocks(bs, (ci - 1) + (cj - 1));
    const std::size_t si = state.stride(mode_i);
    const std::size_t sj = state.stride(mode_j);
    const auto in = state.coeffs();
    std::vector<Complex> out(in.size());

    double dropped = 0.0;
    for (std::size_t base = 0; base < in.size(); ++base) {
        if ((base / si) % static_cast<std::size_t>(ci) != 0 || (base / sj) % static_cast<std::size_t>(cj) != 0) {
            continue;
        }
        auto src = [&](int a, int b) {
            return in[base + static_cast<std::size_t>(a) * si + static_cast<std::size_t>(b) * sj];
        };
        for (int total = 0; total <= (ci - 1) + (cj - 1); ++total) {
            const Eigen::MatrixXcd &block = blocks[static_cast<std::size_t>(total)];
            const int lo = std::max(0, total - (cj - 1));
            const int hi = std::min(total, ci - 1);
            for (int k = 0; k <= total; ++k) {
                Complex value = 0.0;
                for (int n1 = lo; n1 <= hi; ++n1) {
                    value += block(k, n1) * src(n1, total - n1);
                }
                if (k < ci && total - k < cj) {
                    out[base + static_cast<std::size_t>(k) * si + static_cast<std::size_t>(total - k) * sj] = value;
                } else {
                    dropped += std::norm(value);
                }
            }
        }
    }
    const double norm2 = state.squared_norm();
    if (dropped > 1e-12 * std::max(norm2, 1e-300)) {
        std::ostringstream msg;
        msg << "apply_bs: " << dropped << " of the squared norm leaves the truncated register";
        throw TruncationError(msg.str());
    }
    return MultiModeKet(std::vector<int>(state.cutoffs().begin(), state.cutoffs().end()), std::move(out),
                        state.normalized());
}

MultiModeKet phase_shift(const MultiModeKet &state, int mode, double phi) {
    check_mode(state, mode, "phase_shift");
    const int dim = state.cutoff(mode);
    std::vector<Complex> phases(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) {
        phases[static_cast<std::size_t>(n)] = std::polar(1.0, n * phi);
    }
    const std::size_t stride = state.stride(mode);
    std::vector<Complex> out(state.coeffs().begin(), state.coeffs().end());
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out[flat] *= phases[(flat / stride) % static_cast<std::size_t>(dim)];
    }
    return MultiModeKet(std::vector<int>(state.cutoffs().begin(), state.cutoffs().end()), std::move(out),
                        state.normalized());
}

FockKet phase_shift(const FockKet &state, double phi) {
    std::vector<Complex> out(state.coeffs().begin(), state.coeffs().end());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] *= std::polar(1.0, static_cast<double>(n) * phi);
    }
    return FockKet(std::move(out), state.normalized());
}

MultiModeKet widen(const MultiModeKet &state, std::vector<int> cutoffs) {
    if (static_cast<int>(cutoffs.size()) != state.modes()) {
        throw ShapeError("widen: mode count mismatch");
    }
    for (int m = 0; m < state.modes(); ++m) {
        if (cutoffs[static_cast<std::size_t>(m)] < state.cutoff(m)) {
            throw ShapeError("widen: cutoffs may only grow");
        }
    }
    MultiModeKet out = MultiModeKet::vacuum(cutoffs);
    std::vector<Complex> coeffs(out.size());
    std::vector<int> photons(cutoffs.size());
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        std::size_t rest = flat;
        for (int m = state.modes() - 1; m >= 0; --m) {
            const auto dim = static_cast<std::size_t>(state.cutoff(m));
            photons[static_cast<std::size_t>(m)] = static_cast<int>(rest % dim);
            rest /= dim;
        }
        coeffs[out.flat_index(photons)] = state.coeffs()[flat];
    }
    return MultiModeKet(std::move(cutoffs), std::move(coeffs), state.normalized());
}

MultiModeKet append_vacuum(const MultiModeKet &state, int cutoff) {
    if (cutoff < 1) {
        throw ParameterError("append_vacuum: cutoff must be positive");
    }
    std::vector<int> cutoffs(state.cutoffs().begin(), state.cutoffs().end());
    cutoffs.push_back(cutoff);
    std::vector<Complex> out(state.size() * static_cast<std::size_t>(cutoff));
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        out[flat * static_cast<std::size_t>(cutoff)] = state.coeffs()[flat];
    }
    return MultiModeKet(std::move(cutoffs), std::move(out), state.normalized());
}

MultiModeKet append_vacuum(const FockKet &state, int cutoff) {
    return MultiModeKet::product(state, FockKet::vacuum(cutoff));
}

MultiModeKet project(const MultiModeKet &state, int mode, int photons) {
    check_mode(state, mode, "project");
    if (state.modes() < 3) {
        throw ShapeError("project: use branch() for two-mode states");
    }
    if (photons < 0 || photons >= state.cutoff(mode)) {
        throw std::out_of_range("project: photon number outside the truncated basis");
    }
    auto parts = slice(state, mode);
    return MultiModeKet(std::move(parts.cutoffs), std::move(parts.parts[static_cast<std::size_t>(photons)]), false);
}

FockKet branch(const MultiModeKet &two_mode, int n_b) {
    if (two_mode.modes() != 2) {
        throw ShapeError("branch: two-mode state required");
    }
    if (n_b < 0 || n_b >= two_mode.cutoff(1)) {
        throw std::out_of_range("branch: n_b outside the truncated basis");
    }
    const int dim = two_mode.cutoff(0);
    std::vector<Complex> coeffs(static_cast<std::size_t>(dim));
    for (int n_a = 0; n_a < dim; ++n_a) {
        coeffs[static_cast<std::size_t>(n_a)] = two_mode.at({n_a, n_b});
    }
    return FockKet(std::move(coeffs), false);
}

DensityOperator trace_out(const MultiModeKet &state, int mode) {
    check_mode(state, mode, "trace_out");
    if (state.modes() > 3) {
        throw ShapeError("trace_out: the reduced register must have one or two modes");
    }
    auto parts = slice(state, mode);
    std::vector<double> weights(parts.parts.size(), 1.0);
    if (parts.cutoffs.size() == 1) {
        std::vector<FockKet> kets;
        for (auto &p : parts.parts) {
            kets.emplace_back(std::move(p), false);
        }
        return DensityOperator::mixture(kets, weights);
    }
    std::vector<MultiModeKet> kets;
    for (auto &p : parts.parts) {
        kets.emplace_back(parts.cutoffs, std::move(p), false);
    }
    return DensityOperator::mixture(kets, weights);
}

HeraldOutcome herald_zero(const MultiModeKet &two_mode) {
    return make_outcome(branch(two_mode, 0));
}

HeraldOutcome nu_to_n(const FockKet &ket, double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw ParameterError("nu_to_n: nu must lie in (0, 1]");
    }
    if (!ket.normalized()) {
        throw ParameterError("nu_to_n: input ket must be normalized");
    }
    std::vector<Complex> out(ket.coeffs().begin(), ket.coeffs().end());
    double factor = 1.0;
    for (auto &c : out) {
        c *= factor;
        factor *= nu;
    }
    return make_outcome(FockKet(std::move(out), false));
}

HeraldOutcome herald_noclick(const MultiModeKet &two_mode, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ParameterError("herald_noclick: eta must lie in [0, 1]");
    }
    if (two_mode.modes() != 2) {
        throw ShapeError("herald_noclick: two-mode state required");
    }
    std::vector<FockKet> kets;
    std::vector<double> weights;
    double probability = 0.0;
    for (int n_b = 0; n_b < two_mode.cutoff(1); ++n_b) {
        const double w = herald_weight(HeraldMode::kEfficiency, eta, n_b);
        kets.push_back(branch(two_mode, n_b));
        weights.push_back(w);
        probability += w * kets.back().squared_norm();
    }
    if (probability < kMinHeraldProbability) {
        throw HeraldError("herald_noclick: success probability is numerically zero");
    }
    return HeraldOutcome{DensityOperator::mixture(kets, weights).renormalized(), probability};
}

}  // namespace heraldsim
