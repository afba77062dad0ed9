#include "ptkerr/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ptkerr {

void CouplerParams::validate() const {
    // kappa = 0 is tolerated for the oracle and mean-field engines (the
    // pure-Kerr limit); everything that normalizes rates needs kappa > 0.
    if (kappa < 0.0 || !std::isfinite(kappa))
        throw config_error("kappa must be nonnegative and finite");
    if (j_coupling < 0.0 || !std::isfinite(j_coupling))
        throw config_error("j_coupling must be nonnegative and finite");
    if (chi < 0.0 || !std::isfinite(chi))
        throw config_error("chi must be nonnegative and finite");
    if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()))
        throw config_error("alpha0 must be finite");
}

CouplerParams CouplerParams::normalized() const {
    validate();
    if (!(kappa > 0.0))
        throw config_error("normalization requires kappa > 0");
    CouplerParams out = *this;
    out.j_coupling /= kappa;
    out.chi /= kappa;
    out.kappa = 1.0;
    return out;
}

Regime classify_regime(const CouplerParams& p, double exceptional_tol) {
    p.validate();
    if (p.kappa < p.j_coupling * (1.0 - exceptional_tol)) return Regime::pt_symmetric;
    if (p.kappa > p.j_coupling * (1.0 + exceptional_tol)) return Regime::broken;
    return Regime::exceptional;
}

DerivedConstants derive_constants(const CouplerParams& p, double exceptional_tol) {
    const Regime regime = classify_regime(p, exceptional_tol);
    const double k = p.kappa;
    const double j = p.j_coupling;

    DerivedConstants dc;
    dc.kappa = k;
    dc.j_coupling = j;
    dc.regime = regime;
    // principal branch: real >= 0 (broken), positive imaginary (PT)
    dc.lambda = std::sqrt(cplx(k * k - j * j, 0.0));
    dc.eta1 = -k + dc.lambda;
    dc.eta2 = k + dc.lambda;

    const cplx two_lambda_sq = (dc.eta1 + dc.eta2) * (dc.eta1 + dc.eta2);
    if (regime == Regime::exceptional) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        dc.zeta1 = dc.zeta2 = cplx(nan, nan);
        return dc;
    }
    dc.zeta1 = (dc.eta1 * dc.eta1 + j * j) / two_lambda_sq;
    dc.zeta2 = (k / dc.lambda) * (dc.eta1 * dc.eta1 - j * j) / two_lambda_sq;
    return dc;
}

void DerivedConstants::require(Regime r, const char* who) const {
    if (regime != r) {
        std::ostringstream msg;
        msg << who << " requires the " << to_string(r) << " regime but kappa=" << kappa
            << ", J=" << j_coupling << " is " << to_string(regime);
        throw regime_error(msg.str());
    }
}

void DerivedConstants::require_not_exceptional(const char* who) const {
    if (regime == Regime::exceptional) {
        std::ostringstream msg;
        msg << who << " is undefined at the exceptional point kappa = J (lambda = 0)";
        throw regime_error(msg.str());
    }
}

}  // namespace ptkerr
