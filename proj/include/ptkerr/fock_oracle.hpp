#ifndef PTKERR_FOCK_ORACLE_HPP
#define PTKERR_FOCK_ORACLE_HPP

#include <vector>

#include "ptkerr/moments.hpp"
#include "ptkerr/params.hpp"
#include "ptkerr/types.hpp"

namespace ptkerr {

struct FockDims {
    int n_a = 16;
    int n_b = 16;
    int total() const { return n_a * n_b; }
};

// Dense two-mode density matrix on the truncated Fock basis |i>_a |j>_b,
// row-major over the composite index r = i * n_b + j.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(FockDims dims);

    FockDims dims() const { return dims_; }
    int dim() const { return dims_.total(); }

    cplx& at(int row, int col) { return data_[static_cast<size_t>(row) * dim_ + col]; }
    const cplx& at(int row, int col) const { return data_[static_cast<size_t>(row) * dim_ + col]; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    double trace_real() const;
    double hermiticity_error() const;  // max |rho - rho+|
    // Population of the top two Fock levels of either mode.
    double leakage() const;

private:
    FockDims dims_{};
    int dim_ = 0;
    std::vector<cplx> data_;
};

// Truncated coherent state amplitudes, renormalized. Throws config_error if
// the Poisson tail mass beyond dim exceeds 1e-4; tail masses above warn_tol
// are reported through *tail_out but tolerated.
std::vector<cplx> coherent_state_vector(cplx alpha, int dim,
                                        double* tail_out = nullptr,
                                        double refuse_tol = 1e-4);

// |alpha_a> <x| (x) |alpha_b> <x| as a product density matrix.
DensityMatrix product_coherent_density(cplx alpha_a, cplx alpha_b,
                                       FockDims dims);

struct OracleRun {
    CouplerParams params;
    FockDims dims;
    double dt = 1e-3;
    double t_max = 1.0;
    int n_samples = 11;
    double leak_threshold = 1e-6;
    int max_total_dim = 4096;  // memory budget; raise deliberately if needed
    int workers = 0;           // 0 = auto
};

enum class OracleStatus { ok, truncation_exceeded };

struct OracleSample {
    double t = 0.0;
    MomentSet m;
    double trace_drift = 0.0;  // |Tr rho - 1|, never renormalized away
    double leakage = 0.0;
    double herm_error = 0.0;
};

struct OracleResult {
    std::vector<OracleSample> samples;
    OracleStatus status = OracleStatus::ok;
    double t_fail = -1.0;  // set when truncation aborted the run
    double dt = 0.0;
};

// rho_dot = -i [J(ab+ + a+b) + chi/2 b+^2 b^2, rho]
//           - kappa (a a+ rho + rho a a+ - 2 a+ rho a)
//           - kappa (b+ b rho + rho b+ b - 2 b rho b+)
// Stencil application, out must have the same dims as rho.
void lindblad_rhs(const CouplerParams& params, const DensityMatrix& rho,
                  DensityMatrix& out, int workers = 0);

// Largest t with e^{2 lambda t} (|alpha0|^2 + 1) <= n_a / 4 (broken regime);
// +inf when the linear dynamics is bounded.
double oracle_horizon(const DerivedConstants& dc, cplx alpha0, int n_a);

// Fixed-step RK4 over [0, t_max]; samples on the uniform grid. Checks
// dt * spectral_scale before running (stability_error) and aborts the walk
// with status truncation_exceeded the moment leakage passes the threshold.
OracleResult evolve(const OracleRun& run, const DensityMatrix& rho0);

// Convenience: coherent input (alpha0 gain channel, beta0 loss channel).
OracleResult evolve_coherent(const OracleRun& run, cplx alpha0, cplx beta0);

}  // namespace ptkerr

#endif
