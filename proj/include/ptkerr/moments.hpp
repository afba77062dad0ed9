#ifndef PTKERR_MOMENTS_HPP
#define PTKERR_MOMENTS_HPP

#include "ptkerr/types.hpp"

namespace ptkerr {

// First and second moments of the two waveguide modes at one time point.
// adag_bdag is kept explicitly so oracle extraction can cross-check it
// against conj(ab); bb rides along for the second-moment comparisons.
struct MomentSet {
    cplx mean_a = 0.0;
    cplx mean_b = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;
    cplx ab = 0.0;
    cplx adag_bdag = 0.0;
    cplx bb = 0.0;
};

}  // namespace ptkerr

#endif
