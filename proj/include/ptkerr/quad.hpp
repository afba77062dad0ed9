#ifndef PTKERR_QUAD_HPP
#define PTKERR_QUAD_HPP

#include <functional>

#include "ptkerr/types.hpp"

namespace ptkerr {

// (exp(c*t) - 1) / c with the c -> 0 limit handled by series.
cplx expm1_over(cplx c, double t);

struct QuadResult {
    cplx value = 0.0;
    double err_estimate = 0.0;
    long evals = 0;
    bool converged = true;
};

// Adaptive Simpson quadrature for complex-valued integrands. Stops when the
// local Richardson estimate meets rel_tol/abs_tol; gives up past the eval
// cap and reports the achieved error instead of throwing.
QuadResult adaptive_simpson(const std::function<cplx(double)>& f, double a,
                            double b, double rel_tol = 1e-8,
                            double abs_tol = 0.0, long max_evals = 200000);

// C(x) = Integral_x^inf e^{iw}/w dw for x > 0. Asymptotic series for large x,
// quadrature in log space below the crossover; absolute accuracy ~1e-13.
cplx osc_exp_tail(double x);

// Integral_1^U e^{i Theta (u-1)} (1 - 1/u) du, exact up to osc_exp_tail
// accuracy. This is the EB1 reservoir integral after the substitution
// u = e^{2 lambda tau} that makes the nonlinear phase linear in u.
QuadResult eb1_core_integral(double theta_rate, double u_max);

}  // namespace ptkerr

#endif
