#ifndef PTKERR_PARAMS_HPP
#define PTKERR_PARAMS_HPP

#include "ptkerr/types.hpp"

namespace ptkerr {

// Physical rates of the coupler. kappa is the balanced gain/loss rate,
// j_coupling the inter-mode coupling, chi the Kerr coefficient of the loss
// channel, alpha0 the input coherent amplitude (gain channel).
struct CouplerParams {
    double kappa = 1.0;
    double j_coupling = 0.0;
    double chi = 0.0;
    cplx alpha0 = 0.0;

    void validate() const;

    // Rescale so kappa == 1; j_coupling and chi are then in units of kappa
    // and all times are the dimensionless kappa*t.
    CouplerParams normalized() const;
};

// Spectral constants of the linear coupler.
//   lambda = sqrt(kappa^2 - J^2)   principal branch: real >= 0 when broken,
//                                  positive imaginary part when PT-symmetric
//   eta1   = -kappa + lambda
//   eta2   =  kappa + lambda
//   zeta1  = (eta1^2 + J^2) / (eta1 + eta2)^2
//   zeta2  = (kappa/lambda) (eta1^2 - J^2) / (eta1 + eta2)^2
// zeta1 + zeta2 == 0 is an exact algebraic identity.
struct DerivedConstants {
    double kappa = 1.0;
    double j_coupling = 0.0;
    cplx lambda;
    cplx eta1;
    cplx eta2;
    cplx zeta1;
    cplx zeta2;
    Regime regime = Regime::exceptional;

    bool broken() const { return regime == Regime::broken; }

    // Oscillation frequency |Im lambda| in the PT regime.
    double omega() const { return std::abs(lambda.imag()); }

    void require(Regime r, const char* who) const;
    void require_not_exceptional(const char* who) const;
};

Regime classify_regime(const CouplerParams& p, double exceptional_tol = 1e-12);

DerivedConstants derive_constants(const CouplerParams& p,
                                  double exceptional_tol = 1e-12);

}  // namespace ptkerr

#endif
