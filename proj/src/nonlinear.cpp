#include "ptkerr/nonlinear.hpp"

#include <cmath>
#include <sstream>

#include "ptkerr/quad.hpp"

namespace ptkerr {

namespace {

// e^{i theta} - 1 without cancellation for small real theta.
cplx expi_m1(double theta) {
    const double s = std::sin(0.5 * theta);
    return cplx(-2.0 * s * s, std::sin(theta));
}

double lambda_broken(const DerivedConstants& dc, const char* who) {
    dc.require(Regime::broken, who);
    return dc.lambda.real();
}

}  // namespace

PhaseFunctions phase_functions(const DerivedConstants& dc, double chi,
                               double t, Variant variant) {
    const double lam = lambda_broken(dc, "phase_functions");
    const double z1 = dc.zeta1.real();
    const double z2 = dc.zeta2.real();
    PhaseFunctions pf;
    pf.variant = variant;
    if (variant == Variant::noisy) {
        const double w = std::expm1(2.0 * lam * t) / (2.0 * lam);
        pf.theta = z1 * z2 * chi * w;
        const double jf = dc.j_coupling / (2.0 * lam);
        pf.s_scalar = z2 * chi * (dc.kappa / lam) * jf * jf * (w - t);
    } else {
        pf.theta = -z1 * z1 * chi * std::expm1(4.0 * lam * t) / (4.0 * lam);
        pf.s_scalar = 0.0;
    }
    return pf;
}

cplx coherent_phase_moment(cplx alpha, cplx theta, unsigned m) {
    cplx amp = 1.0;
    for (unsigned k = 0; k < m; ++k) amp *= alpha;
    return amp * std::exp(std::norm(alpha) * (std::exp(cplx(0.0, 1.0) * theta) - 1.0));
}

NormalizedMode normalized_mode(const DerivedConstants& dc, cplx alpha0) {
    dc.require(Regime::broken, "normalized_mode");
    NormalizedMode nm;
    nm.zeta1 = dc.zeta1.real();
    nm.o2 = cplx(0.0, -dc.j_coupling) * alpha0 / (dc.eta1 + dc.eta2);
    nm.alpha_tilde = nm.o2 / std::sqrt(nm.zeta1);
    return nm;
}

cplx eb0(const DerivedConstants& dc, double chi, cplx alpha0, double t) {
    const double lam = lambda_broken(dc, "eb0");
    const NormalizedMode nm = normalized_mode(dc, alpha0);
    const PhaseFunctions pf = phase_functions(dc, chi, t, Variant::noisy);
    const double p = std::norm(nm.alpha_tilde);
    const cplx exponent = cplx(lam * t, pf.s_scalar.real()) +
                          p * expi_m1(pf.theta.real());
    return nm.o2 * std::exp(exponent);
}

Eb1Result eb1_over_eb0(const DerivedConstants& dc, double chi, double t) {
    const double lam = lambda_broken(dc, "eb1");
    Eb1Result out;
    if (chi == 0.0 || t <= 0.0) return out;
    const double z1 = dc.zeta1.real();
    const double z2 = dc.zeta2.real();
    const double jf = dc.j_coupling / (2.0 * lam);
    const double sig_scale = (dc.kappa / lam) * jf * jf;
    const double theta_rate = z1 * z2 * chi / (2.0 * lam);
    double u_max = 2.0 * lam * t > 650.0 ? 1e282 : std::exp(2.0 * lam * t);
    QuadResult core = eb1_core_integral(theta_rate, u_max);
    const cplx integral = sig_scale / (2.0 * lam) * core.value;
    out.value = cplx(0.0, 1.0) * z2 * chi * integral;
    out.quad_err = std::abs(z2) * chi * sig_scale / (2.0 * lam) * core.err_estimate;
    return out;
}

Eb1Result eb1(const DerivedConstants& dc, double chi, cplx alpha0, double t) {
    Eb1Result r = eb1_over_eb0(dc, chi, t);
    const cplx e0 = eb0(dc, chi, alpha0, t);
    r.value *= e0;
    r.quad_err *= std::abs(e0);
    return r;
}

cplx mean_b(const DerivedConstants& dc, double chi, cplx alpha0, double t,
            Variant variant, const MeanOptions& opt) {
    if (variant == Variant::noisy) {
        const cplx e0 = eb0(dc, chi, alpha0, t);
        if (!opt.include_eb1) return e0;
        return e0 * (1.0 + eb1_over_eb0(dc, chi, t).value);
    }
    const double lam = lambda_broken(dc, "mean_b");
    const NormalizedMode nm = normalized_mode(dc, alpha0);
    const PhaseFunctions pf = phase_functions(dc, chi, t, Variant::noiseless);
    const double p = std::norm(nm.alpha_tilde);
    return nm.o2 * std::exp(cplx(lam * t, 0.0) + p * expi_m1(pf.theta.real()));
}

cplx mean_a(const DerivedConstants& dc, double chi, cplx alpha0, double t,
            Variant variant, const MeanOptions& opt) {
    if (dc.j_coupling <= 0.0)
        throw undefined_value_error("mean_a is undefined at J = 0");
    return cplx(0.0, 1.0) * (dc.eta2 / dc.j_coupling) *
           mean_b(dc, chi, alpha0, t, variant, opt);
}

double quadrature_mean(cplx mean, double phi) {
    return (mean * std::exp(cplx(0.0, -phi))).real();
}

cplx second_moment_bb(const DerivedConstants& dc, double chi, cplx alpha0,
                      double t, Variant variant) {
    const double lam = lambda_broken(dc, "second_moment_bb");
    const NormalizedMode nm = normalized_mode(dc, alpha0);
    const PhaseFunctions pf = phase_functions(dc, chi, t, variant);
    const double p = std::norm(nm.alpha_tilde);
    const double th = pf.theta.real();
    const cplx exponent = cplx(2.0 * lam * t, 2.0 * pf.s_scalar.real() + th) +
                          p * expi_m1(2.0 * th);
    return nm.o2 * nm.o2 * std::exp(exponent);
}

double photon_number(const DerivedConstants& dc, double chi, cplx alpha0,
                     Channel channel, double t, Variant variant) {
    (void)chi;  // the nonlinear phase cancels in the main terms
    const double lam = lambda_broken(dc, "photon_number");
    const double growth = std::exp(2.0 * lam * t);
    const double a2 = std::norm(alpha0);
    double main;
    if (channel == Channel::b) {
        const double jf = dc.j_coupling / (2.0 * lam);
        main = growth * jf * jf * a2;
    } else {
        const double ef = dc.eta2.real() / (2.0 * lam);
        main = growth * ef * ef * a2;
    }
    if (variant == Variant::noisy) main += noise_occupation(dc, channel, t);
    return main;
}

cplx overlap_factor(const DerivedConstants& dc, double chi, cplx alpha0,
                    double t) {
    const NormalizedMode nm = normalized_mode(dc, alpha0);
    const PhaseFunctions pf = phase_functions(dc, chi, t, Variant::noisy);
    return std::exp(std::norm(nm.alpha_tilde) * expi_m1(pf.theta.real()));
}

double noise_influence(const DerivedConstants& dc, double chi, cplx alpha0,
                       double t) {
    return std::abs(eb1_over_eb0(dc, chi, t).value) *
           std::abs(overlap_factor(dc, chi, alpha0, t));
}

double d3(const MomentSet& m, double eps, double imag_tol) {
    const double norm_prod = m.n_a * m.n_b;
    if (!(norm_prod > eps)) {
        std::ostringstream msg;
        msg << "D3 undefined: n_a * n_b = " << norm_prod << " <= " << eps;
        throw undefined_value_error(msg.str());
    }
    const cplx num = norm_prod + m.mean_a * m.mean_b * m.adag_bdag +
                     std::conj(m.mean_a) * std::conj(m.mean_b) * m.ab -
                     std::norm(m.mean_a) * m.n_b - std::norm(m.mean_b) * m.n_a -
                     m.ab * std::conj(m.ab);
    const double resid = std::abs(num.imag()) / norm_prod;
    if (resid > imag_tol) {
        std::ostringstream msg;
        msg << "D3 imaginary residue " << resid << " exceeds " << imag_tol;
        throw undefined_value_error(msg.str());
    }
    return num.real() / norm_prod;
}

MomentSet nonlinear_moments(const DerivedConstants& dc, double chi,
                            cplx alpha0, double t, Variant variant,
                            bool include_noise_photons,
                            const MeanOptions& opt) {
    MomentSet m;
    m.mean_b = mean_b(dc, chi, alpha0, t, variant, opt);
    m.mean_a = mean_a(dc, chi, alpha0, t, variant, opt);
    m.bb = second_moment_bb(dc, chi, alpha0, t, variant);
    m.ab = cplx(0.0, 1.0) * (dc.eta2 / dc.j_coupling) * m.bb;
    m.adag_bdag = std::conj(m.ab);
    const Variant photon_variant =
        include_noise_photons ? Variant::noisy : Variant::noiseless;
    m.n_a = photon_number(dc, chi, alpha0, Channel::a, t, photon_variant);
    m.n_b = photon_number(dc, chi, alpha0, Channel::b, t, photon_variant);
    return m;
}

PerturbativeCorrection perturbative_correction(const DerivedConstants& dc,
                                               double chi, cplx alpha0,
                                               double t,
                                               bool include_noise_wick,
                                               double rel_tol) {
    dc.require_not_exceptional("perturbative_correction");
    PerturbativeCorrection out;
    if (chi == 0.0 || t <= 0.0 || alpha0 == cplx(0.0)) return out;
    const auto source = [&](double tau) -> cplx {
        const cplx beta = linear_mean_modes(dc, alpha0, tau).mean_b;
        double w = std::norm(beta);
        if (include_noise_wick)
            w += 2.0 * noise_occupation(dc, Channel::b, tau);
        return w * beta;
    };
    const auto f_bb = [&](double tau) {
        return commutator(dc, {CommutatorPair::bb, CommutatorForm::full}, t, tau) *
               source(tau);
    };
    const auto f_ab = [&](double tau) {
        return commutator(dc, {CommutatorPair::ab, CommutatorForm::full}, t, tau) *
               source(tau);
    };
    const QuadResult qb = adaptive_simpson(f_bb, 0.0, t, rel_tol, 0.0, 400000);
    const QuadResult qa = adaptive_simpson(f_ab, 0.0, t, rel_tol, 0.0, 400000);
    const cplx mi_chi(0.0, -chi);
    out.delta_mean_b = mi_chi * qb.value;
    out.delta_mean_a = mi_chi * qa.value;
    out.quad_err = chi * (qb.err_estimate + qa.err_estimate);
    return out;
}

double change_ratio(const DerivedConstants& dc, double chi, cplx alpha0,
                    double t, Variant variant, const ChangeRatioOptions& opt) {
    dc.require_not_exceptional("change_ratio");
    const MeanOptions mo{opt.include_eb1};
    if (dc.regime == Regime::broken) {
        const double x_chi =
            quadrature_mean(mean_b(dc, chi, alpha0, t, variant, mo), opt.phi);
        const double x_0 =
            quadrature_mean(mean_b(dc, 0.0, alpha0, t, variant, mo), opt.phi);
        const double denom = std::abs(x_0);
        if (denom < opt.denom_floor)
            throw undefined_value_error("change_ratio denominator underflow");
        return std::abs(x_chi - x_0) / denom;
    }
    // PT regime: first-order correction over the RMS of the oscillating
    // linear quadrature, RMS(Re[Z e^{-i Omega t}]) = |Z| / sqrt(2).
    const PerturbativeCorrection pc =
        perturbative_correction(dc, chi, alpha0, t, opt.include_noise_wick);
    const cplx rot = std::exp(cplx(0.0, -opt.phi));
    const cplx inv2l = 1.0 / (dc.eta1 + dc.eta2);
    const cplx o1 = cplx(0.0, dc.j_coupling) * inv2l * alpha0;
    const cplx o2 = -cplx(0.0, dc.j_coupling) * inv2l * alpha0;
    const double denom = std::abs(rot * o1 + std::conj(rot * o2)) / std::sqrt(2.0);
    if (denom < opt.denom_floor)
        throw undefined_value_error("change_ratio RMS denominator underflow");
    return std::abs((pc.delta_mean_b * rot).real()) / denom;
}

}  // namespace ptkerr
