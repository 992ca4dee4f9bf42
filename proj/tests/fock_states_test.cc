#include "heraldsim/fock_states.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heraldsim/errors.h"
#include "oracles.h"

using namespace heraldsim;

namespace {

// Coherent-state coefficient straight from the power series, without log-space tricks.
double direct_coherent(double alpha, int n) {
    double c = std::exp(-alpha * alpha / 2.0);
    for (int k = 1; k <= n; ++k) {
        c *= alpha / std::sqrt(static_cast<double>(k));
    }
    return c;
}

}  // namespace

TEST(fock_ket, vacuum_and_number_state) {
    auto v = FockKet::vacuum(5);
    EXPECT_EQ(v.cutoff(), 5);
    EXPECT_TRUE(v.normalized());
    EXPECT_EQ(v[0], Complex(1.0));
    auto one = FockKet::number_state(3, 5);
    EXPECT_EQ(one[3], Complex(1.0));
    EXPECT_EQ(one[0], Complex(0.0));
    EXPECT_THROW(FockKet::number_state(5, 5), std::out_of_range);
    EXPECT_THROW(FockKet::vacuum(0), ParameterError);
}

TEST(fock_ket, normalized_flag_is_checked) {
    EXPECT_THROW(FockKet({0.5, 0.5}, true), NumericalError);
    EXPECT_THROW(FockKet({1.0, 1.0}, false), NumericalError);
    FockKet raw({0.5, 0.5}, false);
    EXPECT_FALSE(raw.normalized());
    EXPECT_NEAR(raw.squared_norm(), 0.5, 1e-15);
    auto unit = raw.renormalized();
    EXPECT_TRUE(unit.normalized());
    EXPECT_NEAR(unit.squared_norm(), 1.0, 1e-15);
    EXPECT_THROW(FockKet({0.0, 0.0}, false).renormalized(), NumericalError);
}

TEST(coherent, vacuum_at_zero_amplitude) {
    auto c = coherent(0.0, 5);
    EXPECT_NEAR(std::abs(c[0] - 1.0), 0.0, 1e-15);
    for (int n = 1; n < 5; ++n) {
        EXPECT_EQ(c[n], Complex(0.0));
    }
}

TEST(coherent, matches_power_series) {
    auto c = coherent(2.0, 20);
    EXPECT_NEAR(c[0].real(), std::exp(-2.0), 1e-6);
    EXPECT_NEAR(c[0].real(), 0.135335, 1e-6);
    // Truncated-space renormalization rescales by less than the dropped tail.
    for (int n = 0; n < 20; ++n) {
        EXPECT_NEAR(c[n].real(), direct_coherent(2.0, n), 1e-6);
        EXPECT_EQ(c[n].imag(), 0.0);
    }
    EXPECT_NEAR(mean_photon_number(c), 4.0, 1e-6);
}

TEST(coherent, mean_photon_number_tracks_alpha_squared) {
    for (double alpha = 0.0; alpha <= 3.0; alpha += 0.25) {
        EXPECT_NEAR(mean_photon_number(coherent(alpha, 30)), alpha * alpha, 1e-5) << alpha;
    }
}

TEST(coherent, tail_check) {
    EXPECT_THROW(coherent(2.0, 4), TruncationError);
    EXPECT_THROW(coherent(3.0, 12), TruncationError);
    EXPECT_THROW(coherent(std::nan(""), 20), ParameterError);
}

TEST(even_cat, vacuum_limit) {
    auto c = even_cat(0.0, 10);
    EXPECT_NEAR(std::abs(overlap(c, FockKet::vacuum(10))), 1.0, 1e-15);
}

TEST(even_cat, coefficient_ratio) {
    auto c = even_cat(2.0, 20);
    EXPECT_NEAR((c[2] / c[0]).real(), 4.0 / std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR((c[2] / c[0]).real(), 2.82843, 1e-5);
}

TEST(even_cat, equals_superposition_of_coherent_states) {
    auto plus = coherent(2.0, 20);
    auto minus = coherent(-2.0, 20);
    std::vector<Complex> sum(20);
    for (int n = 0; n < 20; ++n) {
        sum[static_cast<std::size_t>(n)] = 0.5 * (plus[n] + minus[n]);
    }
    auto reference = FockKet(sum, false).renormalized();
    EXPECT_NEAR(std::abs(overlap(reference, even_cat(2.0, 20))), 1.0, 1e-9);
}

TEST(even_cat, odd_coefficients_vanish) {
    for (double alpha : {0.5, 1.0, 2.0, 2.5}) {
        auto c = even_cat(alpha, 30);
        for (int n = 1; n < 30; n += 2) {
            EXPECT_EQ(c[n], Complex(0.0));
        }
    }
}

TEST(smsv, vacuum_at_zero) {
    auto s = smsv(0.0, 8);
    EXPECT_NEAR(s[0].real(), 1.0, 1e-15);
    for (int n = 1; n < 8; ++n) {
        EXPECT_EQ(s[n], Complex(0.0));
    }
}

TEST(smsv, closed_form_coefficients) {
    const double xi = std::log(std::sqrt(3.0));
    auto s = smsv(xi, 20);
    EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(std::cosh(xi)), 1e-6);
    EXPECT_NEAR(s[0].real(), 0.93060, 1e-5);
    // c_{2n} = sqrt((2n)!) / (2^n n!) (-tanh xi)^n / sqrt(cosh xi)
    for (int n = 0; 2 * n < 20; ++n) {
        const double expected = std::exp(0.5 * log_factorial(2 * n) - n * std::log(2.0) - log_factorial(n)) *
                                std::pow(-std::tanh(xi), n) / std::sqrt(std::cosh(xi));
        EXPECT_NEAR(s[2 * n].real(), expected, 1e-6) << n;
    }
}

TEST(smsv, norm_and_parity) {
    auto s = smsv(0.5, 20);
    EXPECT_NEAR(s.squared_norm(), 1.0, 1e-9);
    for (int n = 1; n < 20; n += 2) {
        EXPECT_EQ(s[n], Complex(0.0));
    }
    EXPECT_NEAR(mean_photon_number(s), std::pow(std::sinh(0.5), 2), 1e-6);
}

TEST(smsv, tail_check) {
    EXPECT_THROW(smsv(1.5, 10), TruncationError);
}

TEST(tmsv, vacuum_and_coefficients) {
    auto zero = tmsv(0.0, 4);
    EXPECT_NEAR(zero.at({0, 0}).real(), 1.0, 1e-15);
    auto pair = tmsv(0.5, 12);
    EXPECT_NEAR(pair.at({0, 0}).real(), 1.0 / std::cosh(0.5), 1e-6);
    EXPECT_NEAR(pair.at({0, 0}).real(), 0.88681, 1e-5);
    for (int m = 0; m < 12; ++m) {
        for (int n = 0; n < 12; ++n) {
            if (m != n) {
                EXPECT_EQ(pair.at({m, n}), Complex(0.0));
            } else {
                EXPECT_NEAR(pair.at({n, n}).real(), std::pow(-std::tanh(0.5), n) / std::cosh(0.5), 1e-6);
            }
        }
    }
    EXPECT_THROW(tmsv(0.5, 6), TruncationError);
}

TEST(overlap, known_values) {
    auto a = coherent(2.0, 30);
    auto b = coherent(-2.0, 30);
    EXPECT_NEAR(std::abs(overlap(a, a) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(overlap(a, b).real(), std::exp(-8.0), 1e-9);
    EXPECT_NEAR(overlap(a, b).real(), 3.3546e-4, 1e-8);
    EXPECT_NEAR(overlap(FockKet::vacuum(40), smsv(0.5, 40)).real(), 1.0 / std::sqrt(std::cosh(0.5)), 1e-12);
    // Renormalizing within 20 terms shifts it by about the dropped tail.
    EXPECT_NEAR(overlap(FockKet::vacuum(20), smsv(0.5, 20)).real(), 1.0 / std::sqrt(std::cosh(0.5)), 1e-7);
    EXPECT_THROW(overlap(FockKet::vacuum(3), FockKet::vacuum(4)), ShapeError);
}

TEST(overlap, conjugate_symmetric) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = oracle::random_ket(rng, 12);
        auto b = oracle::random_ket(rng, 12);
        EXPECT_LT(std::abs(overlap(a, b) - std::conj(overlap(b, a))), 1e-14);
    }
    for (int trial = 0; trial < 20; ++trial) {
        auto a = oracle::random_register(rng, {4, 5}, 9);
        auto b = oracle::random_register(rng, {4, 5}, 9);
        EXPECT_LT(std::abs(overlap(a, b) - std::conj(overlap(b, a))), 1e-14);
    }
}

TEST(mean_photon_number, vacuum_and_density) {
    EXPECT_EQ(mean_photon_number(FockKet::vacuum(6)), 0.0);
    auto rho = DensityOperator::pure(coherent(2.0, 20));
    EXPECT_NEAR(mean_photon_number(rho), 4.0, 1e-6);
}

TEST(constructors, pass_their_own_checks) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> amplitude(0.0, 2.5);
    std::uniform_real_distribution<double> squeezing(0.0, 0.8);
    for (int trial = 0; trial < 30; ++trial) {
        const double alpha = amplitude(rng);
        const double xi = squeezing(rng);
        for (const FockKet &k : {coherent(alpha, 30), even_cat(alpha, 30), smsv(xi, 40)}) {
            EXPECT_TRUE(k.normalized());
            EXPECT_NEAR(k.squared_norm(), 1.0, 1e-12);
            double top = 0.0;
            const int band = (k.cutoff() + 9) / 10;
            for (int n = k.cutoff() - band; n < k.cutoff(); ++n) {
                top += std::norm(k[n]);
            }
            EXPECT_LT(top, kTailTolerance);
        }
    }
}

TEST(multimode_ket, layout) {
    auto k = MultiModeKet::product(FockKet::number_state(1, 3), FockKet::number_state(2, 4));
    EXPECT_EQ(k.modes(), 2);
    EXPECT_EQ(k.size(), 12u);
    EXPECT_EQ(k.stride(0), 4u);
    EXPECT_EQ(k.stride(1), 1u);
    EXPECT_EQ(k.flat_index(std::vector<int>{1, 2}), 6u);
    EXPECT_EQ(k.at({1, 2}), Complex(1.0));
    EXPECT_THROW(k.at({3, 0}), std::out_of_range);
    EXPECT_THROW(k.at({0}), ShapeError);
    EXPECT_THROW(MultiModeKet({3}, {1, 0, 0}, true), ShapeError);
    EXPECT_THROW(MultiModeKet({2, 2}, {1, 0, 0}, true), ShapeError);
}

TEST(density_operator, validation) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    DensityOperator rho({2}, m);
    EXPECT_NEAR(rho.weight(), 1.0, 1e-15);
    Eigen::MatrixXcd bad = m;
    bad(0, 1) = 0.1;
    EXPECT_THROW(DensityOperator({2}, bad), NumericalError);
    Eigen::MatrixXcd negative = m;
    negative(1, 1) = -0.1;
    EXPECT_THROW(DensityOperator({2}, negative), NumericalError);
    Eigen::MatrixXcd heavy = 2.0 * m;
    EXPECT_THROW(DensityOperator({2}, heavy), NumericalError);
    EXPECT_THROW(DensityOperator({3}, m), ShapeError);
}

TEST(density_operator, mixture_and_populations) {
    std::vector<FockKet> kets = {FockKet::vacuum(3), FockKet::number_state(1, 3)};
    std::vector<double> weights = {0.25, 0.5};
    auto rho = DensityOperator::mixture(kets, weights);
    EXPECT_NEAR(rho.weight(), 0.75, 1e-15);
    auto pops = rho.populations();
    EXPECT_NEAR(pops[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(pops[1], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(rho.renormalized().weight(), 1.0, 1e-15);
}

TEST(trace_distance, basic) {
    auto a = DensityOperator::pure(FockKet::vacuum(3));
    auto b = DensityOperator::pure(FockKet::number_state(1, 3));
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
    EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-12);
}

TEST(log_factorial, large_arguments_do_not_overflow) {
    EXPECT_EQ(log_factorial(0), 0.0);
    EXPECT_NEAR(log_factorial(5), std::log(120.0), 1e-13);
    EXPECT_TRUE(std::isfinite(log_factorial(400)));
    auto c = coherent(10.0, 200);
    EXPECT_NEAR(mean_photon_number(c), 100.0, 1e-6);
}

TEST(state_json, round_trip) {
    std::mt19937_64 rng(3);
    auto k = oracle::random_ket(rng, 7);
    auto j = to_json(k);
    EXPECT_EQ(j["modes"], 1);
    auto back = fock_ket_from_json(j);
    EXPECT_EQ(back.cutoff(), 7);
    for (int n = 0; n < 7; ++n) {
        EXPECT_EQ(back[n], k[n]);
    }
    auto reg = oracle::random_register(rng, {3, 4}, 10);
    auto back_reg = multimode_ket_from_json(to_json(reg));
    EXPECT_EQ(back_reg.size(), reg.size());
    EXPECT_NEAR(std::abs(overlap(back_reg, reg)), 1.0, 1e-15);
    EXPECT_THROW(fock_ket_from_json(to_json(reg)), ShapeError);
}
