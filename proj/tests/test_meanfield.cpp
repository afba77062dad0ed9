#include <doctest.h>

#include <cmath>

#include "ptkerr/linear_coupler.hpp"
#include "ptkerr/meanfield.hpp"

using namespace ptkerr;

TEST_CASE("lossless coupler analytic solution") {
    const CouplerParams p{0.0, 0.9, 0.0, 0.0};
    const cplx a0 = 1.7;
    const auto res = integrate_meanfield(p, a0, 4.0, 81);
    for (const auto& s : res.states) {
        CHECK(std::abs(s.alpha - a0 * std::cos(0.9 * s.t)) < 1e-8);
        CHECK(std::abs(s.beta - cplx(0.0, -1.0) * a0 * std::sin(0.9 * s.t)) < 1e-8);
    }
}

TEST_CASE("chi = 0 matches the linear closed form in both regimes") {
    for (double j : {0.6, 1.4}) {
        const CouplerParams p{1.0, j, 0.0, 0.0};
        const auto dc = derive_constants(p);
        const cplx a0(0.8, 0.3);
        const auto res = integrate_meanfield(p, a0, 5.0, 51);
        for (const auto& s : res.states) {
            const auto lin = linear_mean_modes(dc, a0, s.t);
            const double scale = std::max(1.0, std::abs(lin.mean_a));
            CHECK(std::abs(s.alpha - lin.mean_a) < 1e-8 * scale);
            CHECK(std::abs(s.beta - lin.mean_b) < 1e-8 * scale);
        }
    }
}

TEST_CASE("step-halving error estimate scales like h^4") {
    const CouplerParams p{1.0, 0.7, 0.3, 0.0};
    const auto coarse = integrate_meanfield(p, 1.2, 3.0, 31, 8e-3);
    const auto fine = integrate_meanfield(p, 1.2, 3.0, 31, 4e-3);
    CHECK(coarse.step_error > 0.0);
    const double ratio = coarse.step_error / fine.step_error;
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
}

TEST_CASE("regime-faithful trajectories at chi = 0") {
    // PT: bounded oscillation
    const auto pt = integrate_meanfield({0.4, 1.0, 0.0, 0.0}, 1.0, 20.0, 201);
    double max_amp = 0.0;
    for (const auto& s : pt.states) max_amp = std::max(max_amp, std::abs(s.alpha));
    CHECK(max_amp < 5.0);
    // broken: exponential growth
    const auto br = integrate_meanfield({1.0, 0.5, 0.0, 0.0}, 1.0, 6.0, 61);
    CHECK(std::abs(br.states.back().alpha) > 50.0);
}

TEST_CASE("divergence detection reports the blow-up time") {
    try {
        integrate_meanfield({1.0, 0.2, 0.0, 0.0}, 1e145, 30.0, 31);
        FAIL("expected divergence_error");
    } catch (const divergence_error& e) {
        CHECK(e.t_blowup > 0.0);
        CHECK(e.t_blowup < 30.0);
    }
}
