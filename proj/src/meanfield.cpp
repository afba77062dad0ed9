#include "ptkerr/meanfield.hpp"

#include <cmath>
#include <sstream>

namespace ptkerr {

namespace {

struct State {
    cplx a, b;
};

State rhs(const CouplerParams& p, const State& s) {
    const cplx iJ(0.0, p.j_coupling);
    return {p.kappa * s.a - iJ * s.b,
            -p.kappa * s.b - iJ * s.a - cplx(0.0, p.chi) * std::norm(s.b) * s.b};
}

State rk4_step(const CouplerParams& p, const State& s, double h) {
    const State k1 = rhs(p, s);
    const State k2 = rhs(p, {s.a + 0.5 * h * k1.a, s.b + 0.5 * h * k1.b});
    const State k3 = rhs(p, {s.a + 0.5 * h * k2.a, s.b + 0.5 * h * k2.b});
    const State k4 = rhs(p, {s.a + h * k3.a, s.b + h * k3.b});
    return {s.a + h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
            s.b + h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b)};
}

constexpr double overflow_guard = 1e150;

std::vector<MeanFieldState> run_grid(const CouplerParams& p, cplx alpha0,
                                     double t_max, int n_samples, double dt) {
    std::vector<MeanFieldState> out;
    out.reserve(n_samples);
    State s{alpha0, 0.0};
    out.push_back({s.a, s.b, 0.0});
    double t = 0.0;
    for (int i = 1; i < n_samples; ++i) {
        const double t_target = t_max * i / (n_samples - 1);
        const int steps = std::max(1, (int)std::llround((t_target - t) / dt));
        const double h = (t_target - t) / steps;
        for (int k = 0; k < steps; ++k) {
            s = rk4_step(p, s, h);
            t += h;
            if (std::abs(s.a) > overflow_guard || std::abs(s.b) > overflow_guard ||
                !std::isfinite(s.a.real()) || !std::isfinite(s.b.real())) {
                std::ostringstream msg;
                msg << "mean-field trajectory diverged at kappa*t = " << t;
                throw divergence_error(msg.str(), t);
            }
        }
        t = t_target;
        out.push_back({s.a, s.b, t});
    }
    return out;
}

}  // namespace

MeanFieldResult integrate_meanfield(const CouplerParams& params, cplx alpha0,
                                    double t_max, int n_samples, double dt) {
    params.validate();
    if (n_samples < 2) throw config_error("n_samples must be >= 2");
    if (!(t_max > 0.0)) throw config_error("t_max must be positive");
    if (!(dt > 0.0)) throw config_error("dt must be positive");

    MeanFieldResult res;
    res.states = run_grid(params, alpha0, t_max, n_samples, dt);
    const auto half = run_grid(params, alpha0, t_max, n_samples, 0.5 * dt);
    double err = 0.0;
    for (size_t i = 0; i < res.states.size(); ++i) {
        err = std::max(err, std::abs(res.states[i].alpha - half[i].alpha));
        err = std::max(err, std::abs(res.states[i].beta - half[i].beta));
    }
    res.step_error = err;
    return res;
}

}  // namespace ptkerr
