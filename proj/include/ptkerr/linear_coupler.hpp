#ifndef PTKERR_LINEAR_COUPLER_HPP
#define PTKERR_LINEAR_COUPLER_HPP

#include "ptkerr/moments.hpp"
#include "ptkerr/params.hpp"
#include "ptkerr/types.hpp"

namespace ptkerr {

// The chi = 0 coupler solved exactly. Writing the evolved modes over the
// input operators as
//   A(t) = Fa(t) a + Fb(t) b + sqrt(2k) Int_0^t [Fa(t-s) xi_a+ + Fb(t-s) xi_b]
//   B(t) = fa(t) a + fb(t) b + sqrt(2k) Int_0^t [fa(t-s) xi_a+ + fb(t-s) xi_b]
// every coefficient is a two-exponential kernel  p e^{-lambda s} + q e^{lambda s}.
// Fb == fa by the identity eta1*eta2 = -J^2, so three kernels suffice.
struct ExpKernel {
    cplx p = 0.0;  // weight of e^{-lambda s}
    cplx q = 0.0;  // weight of e^{+lambda s}
    cplx eval(cplx lambda, double s) const;
};

struct ModeKernels {
    ExpKernel fa;  // B(t) <- a, and both noise cross kernels
    ExpKernel fb;  // B(t) <- b
    ExpKernel Fa;  // A(t) <- a
};

ModeKernels mode_kernels(const DerivedConstants& dc);

struct LinearModeMeans {
    cplx mean_a;
    cplx mean_b;
};

// Mean fields for a coherent input alpha0 in the gain channel, loss channel
// vacuum. Valid in both regimes; refuses the exceptional point.
LinearModeMeans linear_mean_modes(const DerivedConstants& dc, cplx alpha0,
                                  double t);

enum class CommutatorPair { ab, bb };
enum class CommutatorForm { full, growing_only };

struct CommutatorKind {
    CommutatorPair pair = CommutatorPair::bb;
    CommutatorForm form = CommutatorForm::full;
};

// [A(t), B+(t')] or [B(t), B+(t')] of the linear coupler modes.
// `full` assembles all four exponential kernels plus the noise-integral
// contributions (valid in both regimes, equal-time values exact).
// `growing_only` is the broken-regime asymptotic form
//   c_bb = zeta1 e^{lambda |t-t'|},  c_ab = i (eta2/J) c_bb.
cplx commutator(const DerivedConstants& dc, CommutatorKind kind, double t,
                double t_prime);

enum class Channel { a, b };

// Spontaneous photon occupation <dC+(t) dC(t)> accumulated from the
// amplification noise: 2k Int_0^t |kernel_a(s)|^2 ds in closed form.
double noise_occupation(const DerivedConstants& dc, Channel channel, double t);

// Same quantity by direct numerical quadrature of the kernel; validation
// route for property tests.
double noise_occupation_numeric(const DerivedConstants& dc, Channel channel,
                                double t, double rel_tol = 1e-10);

// sigma(tau) = (kappa/lambda) (J/(eta1+eta2))^2 (e^{2 lambda tau} - 1),
// the reservoir average of the growing-mode noise number operator.
// Broken regime only.
double sigma(const DerivedConstants& dc, double tau);

// Full chi = 0 moment set for coherent input (gain channel):
//   n_c   = |<C>|^2 + N_c(t)
//   <ab>  = <A><B>,  <bb> = <B>^2   (no anomalous noise contractions)
MomentSet linear_moments(const DerivedConstants& dc, cplx alpha0, double t);

}  // namespace ptkerr

#endif
