#include <doctest.h>

#include <cmath>
#include <random>

#include "ptkerr/linear_coupler.hpp"

using namespace ptkerr;

namespace {
const CouplerParams broken_p{1.0, 0.6, 0.0, 1.0};
const CouplerParams pt_p{0.6, 1.0, 0.0, 1.0};
}  // namespace

TEST_CASE("mean modes initial condition and limits") {
    const auto dc = derive_constants(broken_p);
    const auto m0 = linear_mean_modes(dc, 1.0, 0.0);
    CHECK(std::abs(m0.mean_a - 1.0) < 1e-15);
    CHECK(std::abs(m0.mean_b) < 1e-15);

    // lossless coupler: kappa -> 0 gives the directional-coupler solution
    const auto dc_free = derive_constants({1e-14, 0.8, 0.0, 1.0});
    for (double t : {0.3, 1.1, 2.4}) {
        const auto m = linear_mean_modes(dc_free, 2.0, t);
        CHECK(std::abs(m.mean_b - cplx(0.0, -2.0 * std::sin(0.8 * t))) < 1e-10);
        CHECK(std::abs(m.mean_a - 2.0 * std::cos(0.8 * t)) < 1e-10);
    }

    // J = 0: pure amplifier in channel a, channel b stays empty
    const auto dc_j0 = derive_constants({1.0, 0.0, 0.0, 1.0});
    const auto mj = linear_mean_modes(dc_j0, 1.5, 0.7);
    CHECK(std::abs(mj.mean_a - 1.5 * std::exp(0.7)) < 1e-12);
    CHECK(std::abs(mj.mean_b) < 1e-15);

    // broken regime, large t: growing component dominates
    const auto dcb = derive_constants(broken_p);
    const double t = 10.0;
    const auto m = linear_mean_modes(dcb, 1.0, t);
    const cplx o2 = cplx(0.0, -0.6) / (2.0 * dcb.lambda);
    CHECK(std::abs(m.mean_b - std::exp(dcb.lambda * t) * o2) <
          1e-6 * std::abs(m.mean_b));
}

TEST_CASE("equal-time commutators over random draws") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uj(0.05, 3.0);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    int checked = 0;
    while (checked < 120) {
        CouplerParams p{1.0, uj(rng), 0.0, 0.0};  // rates in units of kappa
        if (std::abs(p.kappa - p.j_coupling) < 5e-3) continue;
        const auto dc = derive_constants(p);
        const double t = ut(rng);
        const cplx cbb =
            commutator(dc, {CommutatorPair::bb, CommutatorForm::full}, t, t);
        const cplx cab =
            commutator(dc, {CommutatorPair::ab, CommutatorForm::full}, t, t);
        CHECK(std::abs(cbb - 1.0) < 1e-10);
        CHECK(std::abs(cab) < 1e-10);
        ++checked;
    }
}

TEST_CASE("growing-only commutators") {
    const auto dc = derive_constants(broken_p);
    const cplx g =
        commutator(dc, {CommutatorPair::bb, CommutatorForm::growing_only}, 1.0, 1.0);
    CHECK(std::abs(g - 0.15625) < 1e-14);

    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ut(0.0, 4.0);
    for (int i = 0; i < 20; ++i) {
        const double t = ut(rng), tp = ut(rng);
        const cplx bb = commutator(
            dc, {CommutatorPair::bb, CommutatorForm::growing_only}, t, tp);
        const cplx ab = commutator(
            dc, {CommutatorPair::ab, CommutatorForm::growing_only}, t, tp);
        CHECK(std::abs(ab - cplx(0.0, 1.0) * (dc.eta2 / 0.6) * bb) <
              1e-13 * std::abs(ab));
    }

    // deep in the broken regime the full commutator depends on the time
    // difference only: c_bb -> (eta1 e^{l D} + eta2 e^{-l D}) / (2 l).
    // The growing_only form zeta1 e^{l D} keeps just the growing kernels
    // (equal-time value zeta1, not 1) and differs from full by design.
    for (double base : {5.0, 7.0, 9.0}) {
        const double delta = 0.7;
        const cplx full = commutator(
            dc, {CommutatorPair::bb, CommutatorForm::full}, base + delta, base);
        const cplx asym = (dc.eta1 * std::exp(dc.lambda * delta) +
                           dc.eta2 * std::exp(-dc.lambda * delta)) /
                          (2.0 * dc.lambda);
        CHECK(std::abs(full - asym) / std::abs(asym) <
              10.0 * std::exp(-2.0 * dc.lambda.real() * base));
    }
    const cplx full_eq =
        commutator(dc, {CommutatorPair::bb, CommutatorForm::full}, 1.0, 1.0);
    const cplx grow_eq = commutator(
        dc, {CommutatorPair::bb, CommutatorForm::growing_only}, 1.0, 1.0);
    CHECK(std::abs(full_eq - 1.0) < 1e-12);
    CHECK(std::abs(grow_eq - dc.zeta1) < 1e-14);

    const auto dc_pt = derive_constants(pt_p);
    CHECK_THROWS_AS(
        commutator(dc_pt, {CommutatorPair::bb, CommutatorForm::growing_only}, 1.0, 0.5),
        regime_error);
}

TEST_CASE("noise occupations") {
    const auto dc = derive_constants(broken_p);
    CHECK(noise_occupation(dc, Channel::b, 0.0) == 0.0);
    CHECK(noise_occupation(dc, Channel::a, 0.0) == 0.0);

    // broken-regime closed form N_b = (2 k J^2/l^2)[sinh(2lt)/(4l) - t/2]
    const double lam = dc.lambda.real();
    for (double t : {0.3, 1.0, 2.5}) {
        const double expected = (2.0 * 0.36 / (lam * lam)) *
                                (std::sinh(2.0 * lam * t) / (4.0 * lam) - 0.5 * t);
        CHECK(std::abs(noise_occupation(dc, Channel::b, t) - expected) <
              1e-12 * expected);
    }

    // PT-regime closed form with Omega = |lambda|
    const auto dcp = derive_constants(pt_p);
    const double om = dcp.omega();
    for (double t : {0.4, 1.3, 3.1}) {
        const double expected = (2.0 * 0.6 * 1.0 / (om * om)) *
                                (0.5 * t - std::sin(2.0 * om * t) / (4.0 * om));
        CHECK(std::abs(noise_occupation(dcp, Channel::b, t) - expected) <
              1e-12 * std::max(expected, 1e-12));
    }

    // closed form against the quadrature fallback, both channels and regimes
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> upar(0.1, 1.8);
    std::uniform_real_distribution<double> ut(0.01, 4.0);
    for (int i = 0; i < 25; ++i) {
        CouplerParams p{upar(rng), upar(rng), 0.0, 0.0};
        if (std::abs(p.kappa - p.j_coupling) < 5e-3) continue;
        const auto d = derive_constants(p);
        const double t = ut(rng);
        for (Channel ch : {Channel::a, Channel::b}) {
            const double closed = noise_occupation(d, ch, t);
            const double numeric = noise_occupation_numeric(d, ch, t);
            CHECK(std::abs(closed - numeric) < 1e-8 * std::max(1.0, closed));
            CHECK(closed >= -1e-12);
        }
    }

    // monotone nondecreasing in the broken regime
    double prev_b = 0.0, prev_a = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.1 * i;
        const double nb = noise_occupation(dc, Channel::b, t);
        const double na = noise_occupation(dc, Channel::a, t);
        CHECK(nb >= prev_b - 1e-12);
        CHECK(na >= prev_a - 1e-12);
        prev_b = nb;
        prev_a = na;
    }
}

TEST_CASE("sigma function") {
    const auto dc = derive_constants(broken_p);
    CHECK(sigma(dc, 0.0) == 0.0);
    const double expected = 0.17578125 * std::expm1(1.6);
    CHECK(std::abs(sigma(dc, 1.0) - expected) < 1e-12 * expected);

    // sigma equals the leading growing part of N_b: ratio -> 1
    const double t = 9.0;
    CHECK(std::abs(noise_occupation(dc, Channel::b, t) / sigma(dc, t) - 1.0) <
          2e-2);
    const double t2 = 12.0;
    CHECK(std::abs(noise_occupation(dc, Channel::b, t2) / sigma(dc, t2) - 1.0) <
          std::abs(noise_occupation(dc, Channel::b, t) / sigma(dc, t) - 1.0));

    CHECK_THROWS_AS(sigma(derive_constants(pt_p), 1.0), regime_error);
}

TEST_CASE("linear moment set") {
    const auto dc = derive_constants(broken_p);
    const cplx a0(1.3, -0.4);
    const auto m = linear_moments(dc, a0, 0.8);
    const auto means = linear_mean_modes(dc, a0, 0.8);
    CHECK(m.mean_a == means.mean_a);
    CHECK(m.n_a == doctest::Approx(std::norm(means.mean_a) +
                                   noise_occupation(dc, Channel::a, 0.8)));
    CHECK(m.ab == means.mean_a * means.mean_b);
    CHECK(m.adag_bdag == std::conj(m.ab));
    CHECK(m.bb == means.mean_b * means.mean_b);
}
