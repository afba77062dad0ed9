#ifndef PTKERR_MEANFIELD_HPP
#define PTKERR_MEANFIELD_HPP

#include <vector>

#include "ptkerr/params.hpp"
#include "ptkerr/types.hpp"

namespace ptkerr {

struct MeanFieldState {
    cplx alpha;
    cplx beta;
    double t;
};

struct MeanFieldResult {
    std::vector<MeanFieldState> states;
    double step_error = 0.0;  // max sample deviation between h and h/2 runs
};

// Fixed-step RK4 of the classical equations
//   d alpha/dt =  kappa alpha - i J beta
//   d beta /dt = -kappa beta  - i J alpha - i chi |beta|^2 beta
// from (alpha0, 0), sampled on a uniform grid of n_samples points in
// [0, t_max]. Aborts with divergence_error past the overflow guard.
MeanFieldResult integrate_meanfield(const CouplerParams& params, cplx alpha0,
                                    double t_max, int n_samples,
                                    double dt = 1e-3);

}  // namespace ptkerr

#endif
