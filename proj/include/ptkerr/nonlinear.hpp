#ifndef PTKERR_NONLINEAR_HPP
#define PTKERR_NONLINEAR_HPP

#include "ptkerr/linear_coupler.hpp"
#include "ptkerr/moments.hpp"
#include "ptkerr/params.hpp"
#include "ptkerr/types.hpp"

namespace ptkerr {

// NOISY: reservoir-averaged closed forms (EB0 + EB1 pipeline).
// NOISELESS: evolution under the non-Hermitian Hamiltonian plus Kerr term,
// quantum noise drives dropped.
enum class Variant { noisy, noiseless };

inline const char* to_string(Variant v) {
    return v == Variant::noisy ? "NOISY" : "NOISELESS";
}

// theta multiplies the number operator of the normalized growing mode,
// s_scalar is the scalar phase from averaging sigma(tau).
//   NOISY:     theta = zeta1 zeta2 chi (e^{2 l t} - 1) / (2 l)
//              s     = zeta2 chi (k/l)(J/2l)^2 [(e^{2 l t}-1)/(2 l) - t]
//   NOISELESS: theta = -zeta1^2 chi (e^{4 l t} - 1) / (4 l),  s = 0
struct PhaseFunctions {
    cplx theta = 0.0;
    cplx s_scalar = 0.0;
    Variant variant = Variant::noisy;
};

PhaseFunctions phase_functions(const DerivedConstants& dc, double chi,
                               double t, Variant variant);

// <alpha| e^{i theta n} c^m |alpha> = alpha^m exp(|alpha|^2 (e^{i theta}-1)).
cplx coherent_phase_moment(cplx alpha, cplx theta, unsigned m);

// Growing-mode amplitude o2 = -i J alpha0 / (2 lambda) and its normalized
// version alpha_tilde = o2 / sqrt(zeta1) with [c, c+] = 1.
struct NormalizedMode {
    cplx o2 = 0.0;
    cplx alpha_tilde = 0.0;
    double zeta1 = 0.0;
};

NormalizedMode normalized_mode(const DerivedConstants& dc, cplx alpha0);

// First (coherent) term of the reservoir-averaged <b(t)>:
//   EB0 = o2 exp(lambda t + i s(t) + |at|^2 (e^{i theta(t)} - 1))
cplx eb0(const DerivedConstants& dc, double chi, cplx alpha0, double t);

struct Eb1Result {
    cplx value = 0.0;
    double quad_err = 0.0;
};

// Noise-correction term: EB1 = i zeta2 chi [Int_0^t sigma(tau) e^{i theta(tau)} dtau] EB0.
Eb1Result eb1(const DerivedConstants& dc, double chi, cplx alpha0, double t);

// EB1 / EB0 alone (the relative noise correction).
Eb1Result eb1_over_eb0(const DerivedConstants& dc, double chi, double t);

struct MeanOptions {
    bool include_eb1 = true;
};

cplx mean_b(const DerivedConstants& dc, double chi, cplx alpha0, double t,
            Variant variant, const MeanOptions& opt = {});

// i (eta2 / J) * mean_b; requires J > 0.
cplx mean_a(const DerivedConstants& dc, double chi, cplx alpha0, double t,
            Variant variant, const MeanOptions& opt = {});

// Re(mean * e^{-i phi}); phi = 0 is X, phi = pi/2 is P.
double quadrature_mean(cplx mean, double phi);

// <b^2(t)> main term; <ab> = i (eta2/J) <b^2>, <a+b+> = conj(<ab>).
cplx second_moment_bb(const DerivedConstants& dc, double chi, cplx alpha0,
                      double t, Variant variant);

// n_b = e^{2 lambda t} |o2|^2 (+ N_b(t) for NOISY);
// n_a = (eta2/J)^2 main term (+ N_a(t) for NOISY).
double photon_number(const DerivedConstants& dc, double chi, cplx alpha0,
                     Channel channel, double t, Variant variant);

// <beta1(t), beta2(t) | alpha0, 0> = exp(|at|^2 (e^{i theta_noisy} - 1)).
cplx overlap_factor(const DerivedConstants& dc, double chi, cplx alpha0,
                    double t);

// |EB1/EB0| * |overlap|, the bounded noise-influence measure.
double noise_influence(const DerivedConstants& dc, double chi, cplx alpha0,
                       double t);

// Normalized third-order moment determinant. Requires n_a * n_b > eps;
// asserts the imaginary residue of the assembled numerator is below
// imag_tol before discarding it.
double d3(const MomentSet& m, double eps = 1e-30, double imag_tol = 1e-10);

// Moment set for the D3 / figure pipelines. Photon numbers use the main
// (linear, phase-cancelled) terms; include_noise_photons adds N_a, N_b.
MomentSet nonlinear_moments(const DerivedConstants& dc, double chi,
                            cplx alpha0, double t, Variant variant,
                            bool include_noise_photons = false,
                            const MeanOptions& opt = {});

struct PerturbativeCorrection {
    cplx delta_mean_a = 0.0;
    cplx delta_mean_b = 0.0;
    double quad_err = 0.0;
};

// First order in chi from the exact evolved-mode series with full
// commutators; Wick decomposition <B+BB> = (|<B>|^2 + 2 N_b) <B>.
// Valid in any non-exceptional regime; the PT-regime workhorse.
PerturbativeCorrection perturbative_correction(const DerivedConstants& dc,
                                               double chi, cplx alpha0,
                                               double t,
                                               bool include_noise_wick = true,
                                               double rel_tol = 1e-8);

struct ChangeRatioOptions {
    bool include_eb1 = true;
    bool include_noise_wick = true;
    double phi = pi / 2;
    double denom_floor = 1e-300;
};

// |X(chi) - X(0)| / denom. Broken regime: denom = |X(0)| pointwise (same
// closed-form path at chi = 0). PT regime: numerator from the first-order
// correction, denom = RMS of X0 over one oscillation period 2 pi / Omega.
double change_ratio(const DerivedConstants& dc, double chi, cplx alpha0,
                    double t, Variant variant,
                    const ChangeRatioOptions& opt = {});

}  // namespace ptkerr

#endif
