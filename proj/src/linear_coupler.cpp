#include "ptkerr/linear_coupler.hpp"

#include <cmath>

#include "ptkerr/quad.hpp"

namespace ptkerr {

cplx ExpKernel::eval(cplx lambda, double s) const {
    return p * std::exp(-lambda * s) + q * std::exp(lambda * s);
}

ModeKernels mode_kernels(const DerivedConstants& dc) {
    dc.require_not_exceptional("mode_kernels");
    const cplx inv2l = 1.0 / (dc.eta1 + dc.eta2);  // 1/(2 lambda)
    const cplx iJ(0.0, dc.j_coupling);
    ModeKernels k;
    k.fa = {iJ * inv2l, -iJ * inv2l};
    k.fb = {dc.eta2 * inv2l, dc.eta1 * inv2l};
    k.Fa = {dc.eta1 * inv2l, dc.eta2 * inv2l};
    return k;
}

LinearModeMeans linear_mean_modes(const DerivedConstants& dc, cplx alpha0,
                                  double t) {
    const ModeKernels k = mode_kernels(dc);
    return {k.Fa.eval(dc.lambda, t) * alpha0, k.fa.eval(dc.lambda, t) * alpha0};
}

namespace {

// Int_0^m k1(t - tau) conj(k2(t' - tau)) dtau, all four exponential cross
// terms in closed form.
cplx kernel_cross_integral(const ExpKernel& k1, const ExpKernel& k2,
                           cplx lambda, double t, double tp, double m) {
    const cplx lc = std::conj(lambda);
    const cplx c1[2] = {k1.p, k1.q};
    const cplx c2[2] = {std::conj(k2.p), std::conj(k2.q)};
    const cplx e1[2] = {-lambda, lambda};
    const cplx e2[2] = {-lc, lc};
    cplx total = 0.0;
    for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
            // e^{e1 (t - tau)} e^{e2 (t' - tau)} integrated over tau
            const cplx pre = c1[u] * c2[v] * std::exp(e1[u] * t + e2[v] * tp);
            total += pre * expm1_over(-(e1[u] + e2[v]), m);
        }
    }
    return total;
}

}  // namespace

cplx commutator(const DerivedConstants& dc, CommutatorKind kind, double t,
                double t_prime) {
    if (kind.form == CommutatorForm::growing_only) {
        dc.require(Regime::broken, "commutator (growing_only)");
        const cplx cbb =
            dc.zeta1 * std::exp(dc.lambda * std::abs(t - t_prime));
        if (kind.pair == CommutatorPair::bb) return cbb;
        return cplx(0.0, 1.0) * (dc.eta2 / dc.j_coupling) * cbb;
    }
    dc.require_not_exceptional("commutator");
    const ModeKernels k = mode_kernels(dc);
    const ExpKernel& k1a = (kind.pair == CommutatorPair::ab) ? k.Fa : k.fa;
    const ExpKernel& k1b = (kind.pair == CommutatorPair::ab) ? k.fa : k.fb;
    // system part: k1_a(t) conj(fa(t')) + k1_b(t) conj(fb(t'))
    cplx total = k1a.eval(dc.lambda, t) * std::conj(k.fa.eval(dc.lambda, t_prime)) +
                 k1b.eval(dc.lambda, t) * std::conj(k.fb.eval(dc.lambda, t_prime));
    // noise part: 2 kappa Int_0^min [ k1_b conj(k2_b) - k1_a conj(k2_a) ]
    const double m = std::min(t, t_prime);
    if (m > 0.0) {
        total += 2.0 * dc.kappa *
                 (kernel_cross_integral(k1b, k.fb, dc.lambda, t, t_prime, m) -
                  kernel_cross_integral(k1a, k.fa, dc.lambda, t, t_prime, m));
    }
    return total;
}

double noise_occupation(const DerivedConstants& dc, Channel channel, double t) {
    dc.require_not_exceptional("noise_occupation");
    const ModeKernels k = mode_kernels(dc);
    const ExpKernel& ka = (channel == Channel::b) ? k.fa : k.Fa;
    // 2 kappa Int_0^t |ka(s)|^2 ds; only the amplification-noise contraction
    // <xi_a xi_a+> = delta survives.
    const cplx lc = std::conj(dc.lambda);
    const cplx c1[2] = {ka.p, ka.q};
    const cplx e1[2] = {-dc.lambda, dc.lambda};
    cplx total = 0.0;
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            total += c1[u] * std::conj(c1[v]) *
                     expm1_over(e1[u] + std::conj(e1[v]), t);
    return 2.0 * dc.kappa * total.real();
}

double noise_occupation_numeric(const DerivedConstants& dc, Channel channel,
                                double t, double rel_tol) {
    dc.require_not_exceptional("noise_occupation_numeric");
    if (t == 0.0) return 0.0;
    const ModeKernels k = mode_kernels(dc);
    const ExpKernel ka = (channel == Channel::b) ? k.fa : k.Fa;
    const cplx lambda = dc.lambda;
    const auto f = [&](double s) -> cplx {
        const cplx v = ka.eval(lambda, s);
        return v * std::conj(v);
    };
    QuadResult q = adaptive_simpson(f, 0.0, t, rel_tol, 0.0, 400000);
    return 2.0 * dc.kappa * q.value.real();
}

double sigma(const DerivedConstants& dc, double tau) {
    dc.require(Regime::broken, "sigma");
    const double lam = dc.lambda.real();
    const double jf = dc.j_coupling / (2.0 * lam);
    return (dc.kappa / lam) * jf * jf * std::expm1(2.0 * lam * tau);
}

MomentSet linear_moments(const DerivedConstants& dc, cplx alpha0, double t) {
    const LinearModeMeans means = linear_mean_modes(dc, alpha0, t);
    MomentSet m;
    m.mean_a = means.mean_a;
    m.mean_b = means.mean_b;
    m.n_a = std::norm(means.mean_a) + noise_occupation(dc, Channel::a, t);
    m.n_b = std::norm(means.mean_b) + noise_occupation(dc, Channel::b, t);
    m.ab = means.mean_a * means.mean_b;
    m.adag_bdag = std::conj(m.ab);
    m.bb = means.mean_b * means.mean_b;
    return m;
}

}  // namespace ptkerr
