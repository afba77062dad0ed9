#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ptkerr/fock_oracle.hpp"
#include "ptkerr/linear_coupler.hpp"

using namespace ptkerr;

TEST_CASE("coherent state vector") {
    const auto vac = coherent_state_vector(0.0, 8);
    CHECK(vac[0] == cplx(1.0));
    for (int n = 1; n < 8; ++n) CHECK(vac[n] == cplx(0.0));

    double tail = 1.0;
    const auto v = coherent_state_vector(1.0, 30, &tail);
    CHECK(tail < 1e-30);
    double norm = 0.0;
    for (const auto& c : v) norm += std::norm(c);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
    // <n> of the truncated state
    double nbar = 0.0;
    for (int n = 0; n < 30; ++n) nbar += n * std::norm(v[n]);
    CHECK(nbar == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(coherent_state_vector(2.0, 8), config_error);
}

TEST_CASE("lindblad rhs preserves trace and hermiticity") {
    const FockDims dims{6, 6};
    const int D = dims.total();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    DensityMatrix rho(dims), out(dims);
    // random Hermitian supported away from the truncation boundary
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const int r = i * 6 + j, c = k * 6 + l;
                    if (r <= c) {
                        const cplx v(u(rng), r == c ? 0.0 : u(rng));
                        rho.at(r, c) = v;
                        rho.at(c, r) = std::conj(v);
                    }
                }
    const CouplerParams p{0.8, 0.5, 0.3, 0.0};
    lindblad_rhs(p, rho, out);
    double tr = 0.0;
    for (int r = 0; r < D; ++r) tr += out.at(r, r).real();
    CHECK(std::abs(tr) < 1e-12);
    CHECK(out.hermiticity_error() < 1e-12);
}

TEST_CASE("damped cavity: loss channel decays at rate kappa") {
    OracleRun run;
    run.params = {1.0, 0.0, 0.0, 0.0};
    run.dims = {20, 12};
    run.dt = 1e-3;
    run.t_max = 0.25;
    run.n_samples = 6;
    OracleResult res = evolve_coherent(run, 0.0, 1.0);
    REQUIRE(res.status == OracleStatus::ok);
    for (const auto& s : res.samples) {
        CHECK(std::abs(s.m.mean_b - std::exp(-s.t)) < 2e-5);
        CHECK(s.herm_error < 1e-9);
        CHECK(std::abs(s.m.adag_bdag - std::conj(s.m.ab)) < 1e-12);
    }
}

TEST_CASE("gain amplifier moments") {
    OracleRun run;
    run.params = {1.0, 0.0, 0.0, 0.0};
    run.dims = {34, 4};
    run.dt = 1e-3;
    run.t_max = 0.35;
    run.n_samples = 5;
    run.leak_threshold = 1e-5;
    OracleResult res = evolve_coherent(run, 1.0, 0.0);
    REQUIRE(res.status == OracleStatus::ok);
    for (const auto& s : res.samples) {
        const double g = std::exp(s.t);
        CHECK(std::abs(s.m.mean_a - g) < 5e-4 * g);
        CHECK(std::abs(s.m.n_a - (g * g + (g * g - 1.0))) < 1e-3 * g * g);
    }
}

TEST_CASE("pure Kerr evolution reproduces the rotated coherent mean") {
    const double chi = 0.2;
    const cplx beta = 1.0;
    OracleRun run;
    run.params = {0.0, 0.0, chi, 0.0};
    run.dims = {4, 30};
    run.dt = 2e-3;
    run.t_max = 0.5 * 2.0 * pi / chi;  // half a revival period
    run.n_samples = 6;
    OracleResult res = evolve_coherent(run, 0.0, beta);
    REQUIRE(res.status == OracleStatus::ok);
    for (const auto& s : res.samples) {
        const cplx exact =
            beta * std::exp(-std::norm(beta) *
                            (1.0 - std::exp(cplx(0.0, -chi * s.t))));
        CHECK(std::abs(s.m.mean_b - exact) < 1e-7);
    }
}

TEST_CASE("linear anchor at small scale") {
    const CouplerParams p{1.0, 0.6, 0.0, 0.0};
    const auto dc = derive_constants(p);
    OracleRun run;
    run.params = p;
    run.dims = {26, 16};
    run.dt = 1e-3;
    run.t_max = 0.25;
    run.n_samples = 4;
    OracleResult res = evolve_coherent(run, 1.0, 0.0);
    REQUIRE(res.status == OracleStatus::ok);
    for (const auto& s : res.samples) {
        if (s.t == 0.0) continue;
        const MomentSet lin = linear_moments(dc, 1.0, s.t);
        CHECK(std::abs(s.m.mean_a - lin.mean_a) < 3e-5 * std::abs(lin.mean_a));
        CHECK(std::abs(s.m.mean_b - lin.mean_b) < 3e-5 * std::abs(lin.mean_b));
        CHECK(std::abs(s.m.n_a - lin.n_a) < 1e-4 * lin.n_a);
        CHECK(std::abs(s.m.n_b - lin.n_b) < 1e-4 * lin.n_b);
        CHECK(std::abs(s.m.ab - lin.ab) < 1e-4 * std::abs(lin.ab));
        CHECK(std::abs(s.m.bb - lin.bb) < 1e-4 * std::abs(lin.bb));
        CHECK(s.trace_drift < 10.0 * run.leak_threshold);
    }
}

TEST_CASE("determinism across repetitions and worker counts") {
    OracleRun run;
    run.params = {1.0, 0.5, 1e-3, 0.0};
    run.dims = {10, 10};
    run.dt = 2e-3;
    run.t_max = 0.2;
    run.n_samples = 3;
    run.workers = 1;
    const OracleResult a = evolve_coherent(run, 1.0, 0.0);
    const OracleResult b = evolve_coherent(run, 1.0, 0.0);
    run.workers = 4;
    const OracleResult c = evolve_coherent(run, 1.0, 0.0);
    REQUIRE(a.samples.size() == b.samples.size());
    REQUIRE(a.samples.size() == c.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].m.mean_a == b.samples[i].m.mean_a);
        CHECK(a.samples[i].m.mean_a == c.samples[i].m.mean_a);
        CHECK(a.samples[i].m.bb == c.samples[i].m.bb);
        CHECK(a.samples[i].m.n_b == c.samples[i].m.n_b);
    }
}

TEST_CASE("stability and budget gates") {
    OracleRun run;
    run.params = {1.0, 0.5, 0.0, 0.0};
    run.dims = {30, 30};
    run.dt = 0.1;  // way past the spectral stability bound
    run.t_max = 0.5;
    DensityMatrix rho0 = product_coherent_density(0.0, 0.0, run.dims);
    CHECK_THROWS_AS(evolve(run, rho0), stability_error);

    run.dt = 1e-3;
    run.max_total_dim = 100;
    CHECK_THROWS_AS(evolve(run, rho0), config_error);
}

TEST_CASE("truncation abort reports the failure time") {
    OracleRun run;
    run.params = {1.0, 0.0, 0.0, 0.0};  // gain floods a tiny basis
    run.dims = {8, 4};
    run.dt = 1e-3;
    run.t_max = 2.0;
    run.n_samples = 21;
    OracleResult res = evolve_coherent(run, 0.6, 0.0);
    CHECK(res.status == OracleStatus::truncation_exceeded);
    CHECK(res.t_fail > 0.0);
    CHECK(res.t_fail < 2.0);
    CHECK(!res.samples.empty());
}

TEST_CASE("oracle horizon rule") {
    const auto dc = derive_constants({1.0, 0.6, 0.0, 0.0});
    const double t = oracle_horizon(dc, 1.0, 32);
    // e^{2 lambda t} * 2 = 8 at the bound
    CHECK(std::exp(2.0 * dc.lambda.real() * t) * 2.0 ==
          doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::isinf(
        oracle_horizon(derive_constants({0.5, 1.0, 0.0, 0.0}), 1.0, 32)));
    CHECK(oracle_horizon(dc, 100.0, 32) == 0.0);
}
