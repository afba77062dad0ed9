#include "ptkerr/quad.hpp"

#include <cmath>

namespace ptkerr {

cplx expm1_over(cplx c, double t) {
    const cplx z = c * t;
    if (std::abs(z) < 1e-8) {
        return t * (1.0 + z * (0.5 + z / 6.0));
    }
    return (std::exp(z) - 1.0) / c;
}

namespace {

struct SimpsonCtx {
    const std::function<cplx(double)>* f;
    double rel_tol;
    double abs_tol;
    long max_evals;
    long evals = 0;
    double err = 0.0;
    bool converged = true;
};

cplx simpson_step(SimpsonCtx& ctx, double a, double b, cplx fa, cplx fm, cplx fb,
                  cplx whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = (*ctx.f)(lm), frm = (*ctx.f)(rm);
    ctx.evals += 2;
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx delta = left + right - whole;
    const double scale = std::max(std::abs(left + right), std::abs(whole));
    if (depth <= 0 || ctx.evals > ctx.max_evals) {
        ctx.err += std::abs(delta) / 15.0;
        if (std::abs(delta) / 15.0 > ctx.abs_tol + ctx.rel_tol * scale)
            ctx.converged = false;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) / 15.0 <= ctx.abs_tol + ctx.rel_tol * scale) {
        ctx.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_step(ctx, a, m, fa, flm, fm, left, depth - 1) +
           simpson_step(ctx, m, b, fm, frm, fb, right, depth - 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<cplx(double)>& f, double a,
                            double b, double rel_tol, double abs_tol,
                            long max_evals) {
    QuadResult out;
    if (a == b) return out;
    SimpsonCtx ctx{&f, rel_tol, abs_tol, max_evals};
    // seed with a few panels so narrow features near the endpoints are seen
    const int n0 = 8;
    cplx total = 0.0;
    const double h = (b - a) / n0;
    for (int i = 0; i < n0; ++i) {
        const double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        const cplx f0 = f(x0), fm = f(xm), f1 = f(x1);
        ctx.evals += 3;
        const cplx whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(ctx, x0, x1, f0, fm, f1, whole, 48);
    }
    out.value = total;
    out.err_estimate = ctx.err;
    out.evals = ctx.evals;
    out.converged = ctx.converged;
    return out;
}

namespace {

// Asymptotic series of C(x) = Int_x^inf e^{iw}/w dw:
//   C(x) = -e^{ix} sum_{k>=1} (k-1)! / (ix)^k
// truncated at the smallest term; good to ~1e-15 absolute for x >= 50.
cplx tail_asymptotic(double x) {
    const cplx iz(0.0, x);
    cplx term = 1.0 / iz;
    cplx sum = term;
    double prev = std::abs(term);
    for (int k = 2; k <= 40; ++k) {
        term *= static_cast<double>(k - 1) / iz;
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
        sum += term;
        if (prev < 1e-18) break;
    }
    return -std::exp(cplx(0.0, x)) * sum;
}

constexpr double tail_crossover = 50.0;

}  // namespace

cplx osc_exp_tail(double x) {
    if (!(x > 0.0)) throw config_error("osc_exp_tail requires x > 0");
    if (x >= tail_crossover) return tail_asymptotic(x);
    static const cplx c50 = tail_asymptotic(tail_crossover);
    // Int_x^50 e^{iw}/w dw in log space: w = e^v
    const auto f = [](double v) { return std::exp(cplx(0.0, std::exp(v))); };
    QuadResult q = adaptive_simpson(f, std::log(x), std::log(tail_crossover),
                                    1e-13, 1e-15, 400000);
    return c50 + q.value;
}

QuadResult eb1_core_integral(double theta_rate, double u_max) {
    QuadResult out;
    const double U = u_max;
    if (U <= 1.0) return out;
    const double th = theta_rate;
    if (th < 0.0) {
        out = eb1_core_integral(-th, U);
        out.value = std::conj(out.value);
        return out;
    }
    const double span = th * (U - 1.0);
    if (span < 1e-8) {
        // phase negligible: Int (1 - 1/u) du with a first-order correction
        const double base_re = (U - 1.0) - std::log(U);
        const double corr = (U - 1.0) * (U - 1.0) / 2.0 - base_re;
        out.value = cplx(base_re, th * corr);
        out.err_estimate = span * span * std::abs(out.value);
        return out;
    }
    // e^{-i th} [ (e^{i th U} - e^{i th})/(i th) - (C(th) - C(th U)) ]
    const cplx phase_part =
        (std::exp(cplx(0.0, th * U)) - std::exp(cplx(0.0, th))) / cplx(0.0, th);
    const cplx log_part = osc_exp_tail(th) - osc_exp_tail(th * U);
    out.value = std::exp(cplx(0.0, -th)) * (phase_part - log_part);
    out.err_estimate = 5e-14 * (1.0 + std::abs(out.value));
    return out;
}

}  // namespace ptkerr
