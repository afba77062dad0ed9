#include "ptkerr/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

namespace ptkerr {

DensityMatrix::DensityMatrix(FockDims dims)
    : dims_(dims), dim_(dims.total()),
      data_(static_cast<size_t>(dims.total()) * dims.total(), cplx(0.0)) {
    if (dims.n_a < 2 || dims.n_b < 2)
        throw config_error("Fock truncation must be >= 2 per mode");
}

double DensityMatrix::trace_real() const {
    double tr = 0.0;
    for (int r = 0; r < dim_; ++r) tr += at(r, r).real();
    return tr;
}

double DensityMatrix::hermiticity_error() const {
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r)
        for (int c = r; c < dim_; ++c)
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
    return worst;
}

double DensityMatrix::leakage() const {
    const int na = dims_.n_a, nb = dims_.n_b;
    double pop = 0.0;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            if (i >= na - 2 || j >= nb - 2) {
                const int r = i * nb + j;
                pop += at(r, r).real();
            }
        }
    }
    return pop;
}

std::vector<cplx> coherent_state_vector(cplx alpha, int dim, double* tail_out,
                                        double refuse_tol) {
    if (dim < 1) throw config_error("coherent_state_vector: dim must be >= 1");
    std::vector<cplx> v(dim);
    v[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt((double)n);
    double mass = 0.0;
    for (const cplx& c : v) mass += std::norm(c);
    const double tail = std::max(0.0, 1.0 - mass);
    if (tail_out) *tail_out = tail;
    if (tail > refuse_tol) {
        std::ostringstream msg;
        msg << "coherent state |alpha|^2 = " << std::norm(alpha)
            << " has Poisson tail mass " << tail << " beyond dim " << dim
            << " (limit " << refuse_tol << ")";
        throw config_error(msg.str());
    }
    const double inv = 1.0 / std::sqrt(mass);
    for (cplx& c : v) c *= inv;
    return v;
}

DensityMatrix product_coherent_density(cplx alpha_a, cplx alpha_b,
                                       FockDims dims) {
    const auto va = coherent_state_vector(alpha_a, dims.n_a);
    const auto vb = coherent_state_vector(alpha_b, dims.n_b);
    DensityMatrix rho(dims);
    const int nb = dims.n_b, D = dims.total();
    std::vector<cplx> psi(D);
    for (int i = 0; i < dims.n_a; ++i)
        for (int j = 0; j < nb; ++j) psi[i * nb + j] = va[i] * vb[j];
    for (int r = 0; r < D; ++r) {
        const cplx pr = psi[r];
        cplx* row = rho.data() + static_cast<size_t>(r) * D;
        for (int c = 0; c < D; ++c) row[c] = pr * std::conj(psi[c]);
    }
    return rho;
}

namespace {

struct Stencil {
    int na, nb, D;
    double kappa, J, chi;
    std::vector<double> sq;           // sqrt(0..max)
    std::vector<cplx> col_diag;       // +i chi/2 l(l-1) - kappa (k+1) - kappa l
    std::vector<double> r_abdag;      // sqrt(k) sqrt(l+1), masked
    std::vector<double> r_adagb;      // sqrt(k+1) sqrt(l), masked
    std::vector<double> gain_col;     // sqrt(k), masked k >= 1
    std::vector<double> loss_col;     // sqrt(l+1), masked l+1 < nb

    Stencil(const CouplerParams& p, FockDims dims)
        : na(dims.n_a), nb(dims.n_b), D(dims.total()),
          kappa(p.kappa), J(p.j_coupling), chi(p.chi) {
        sq.resize(std::max(na, nb) + 2);
        for (size_t n = 0; n < sq.size(); ++n) sq[n] = std::sqrt((double)n);
        col_diag.resize(D);
        r_abdag.assign(D, 0.0);
        r_adagb.assign(D, 0.0);
        gain_col.assign(D, 0.0);
        loss_col.assign(D, 0.0);
        for (int k = 0; k < na; ++k) {
            for (int l = 0; l < nb; ++l) {
                const int c = k * nb + l;
                col_diag[c] = cplx(-kappa * ((k + 1) + l),
                                   0.5 * chi * l * (l - 1));
                if (k >= 1 && l + 1 < nb) r_abdag[c] = sq[k] * sq[l + 1];
                if (k + 1 < na && l >= 1) r_adagb[c] = sq[k + 1] * sq[l];
                if (k >= 1) gain_col[c] = sq[k];
                if (l + 1 < nb) loss_col[c] = sq[l + 1];
            }
        }
    }

    void apply_rows(const cplx* rho, cplx* out, int r_begin, int r_end) const {
        const cplx iJ(0.0, J);
        const int s = nb - 1;
        for (int r = r_begin; r < r_end; ++r) {
            const int i = r / nb, j = r % nb;
            const cplx row_diag(-kappa * ((i + 1) + j), -0.5 * chi * j * (j - 1));
            const cplx* rr = rho + static_cast<size_t>(r) * D;
            cplx* orow = out + static_cast<size_t>(r) * D;
            for (int c = 0; c < D; ++c) orow[c] = (row_diag + col_diag[c]) * rr[c];
            if (i + 1 < na && j >= 1) {
                const cplx f = -iJ * (sq[i + 1] * sq[j]);
                const cplx* src = rho + static_cast<size_t>(r + s) * D;
                for (int c = 0; c < D; ++c) orow[c] += f * src[c];
            }
            if (i >= 1 && j + 1 < nb) {
                const cplx f = -iJ * (sq[i] * sq[j + 1]);
                const cplx* src = rho + static_cast<size_t>(r - s) * D;
                for (int c = 0; c < D; ++c) orow[c] += f * src[c];
            }
            for (int c = s; c < D; ++c) orow[c] += iJ * r_abdag[c] * rr[c - s];
            for (int c = 0; c < D - s; ++c) orow[c] += iJ * r_adagb[c] * rr[c + s];
            if (i >= 1) {
                const double f = 2.0 * kappa * sq[i];
                const cplx* src = rho + static_cast<size_t>(r - nb) * D;
                for (int c = nb; c < D; ++c)
                    orow[c] += f * gain_col[c] * src[c - nb];
            }
            if (j + 1 < nb) {
                const double f = 2.0 * kappa * sq[j + 1];
                const cplx* src = rho + static_cast<size_t>(r + 1) * D;
                for (int c = 0; c < D - 1; ++c)
                    orow[c] += f * loss_col[c] * src[c + 1];
            }
        }
    }
};

int resolve_workers(int requested, int D) {
    if (requested > 0) return requested;
    if (D < 512) return 1;
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp<int>(static_cast<int>(hw), 1, 8);
}

template <class Fn>
void parallel_rows(int D, int workers, Fn&& fn) {
    if (workers <= 1) {
        fn(0, D);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (D + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk, hi = std::min(D, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

void extract_moments(const DensityMatrix& rho, MomentSet& m) {
    const FockDims d = rho.dims();
    const int na = d.n_a, nb = d.n_b;
    const auto sq = [](int n) { return std::sqrt((double)n); };
    cplx a = 0, b = 0, ab = 0, bb = 0, adbd = 0;
    double n_a = 0, n_b = 0;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            const int r = i * nb + j;
            const double pop = rho.at(r, r).real();
            n_a += i * pop;
            n_b += j * pop;
            if (i >= 1) a += sq(i) * rho.at(r, r - nb);
            if (j >= 1) b += sq(j) * rho.at(r, r - 1);
            if (i >= 1 && j >= 1) ab += sq(i) * sq(j) * rho.at(r, r - nb - 1);
            if (j >= 2) bb += sq(j) * sq(j - 1) * rho.at(r, r - 2);
            if (i + 1 < na && j + 1 < nb)
                adbd += sq(i + 1) * sq(j + 1) * rho.at(r, r + nb + 1);
        }
    }
    m.mean_a = a;
    m.mean_b = b;
    m.n_a = n_a;
    m.n_b = n_b;
    m.ab = ab;
    m.adag_bdag = adbd;
    m.bb = bb;
}

double diag_leakage(const cplx* rho, int na, int nb) {
    const int D = na * nb;
    double pop = 0.0;
    for (int i = 0; i < na; ++i) {
        const int base = i * nb;
        if (i >= na - 2) {
            for (int j = 0; j < nb; ++j) {
                const int r = base + j;
                pop += rho[static_cast<size_t>(r) * D + r].real();
            }
        } else {
            for (int j = nb - 2; j < nb; ++j) {
                const int r = base + j;
                pop += rho[static_cast<size_t>(r) * D + r].real();
            }
        }
    }
    return pop;
}

}  // namespace

void lindblad_rhs(const CouplerParams& params, const DensityMatrix& rho,
                  DensityMatrix& out, int workers) {
    params.validate();
    if (out.dims().n_a != rho.dims().n_a || out.dims().n_b != rho.dims().n_b)
        throw config_error("lindblad_rhs: dims mismatch");
    const Stencil st(params, rho.dims());
    const int w = resolve_workers(workers, st.D);
    parallel_rows(st.D, w, [&](int lo, int hi) {
        st.apply_rows(rho.data(), out.data(), lo, hi);
    });
}

double oracle_horizon(const DerivedConstants& dc, cplx alpha0, int n_a) {
    if (dc.regime != Regime::broken)
        return std::numeric_limits<double>::infinity();
    const double lam = dc.lambda.real();
    const double bound = n_a / (4.0 * (std::norm(alpha0) + 1.0));
    if (bound <= 1.0) return 0.0;
    return std::log(bound) / (2.0 * lam);
}

OracleResult evolve(const OracleRun& run, const DensityMatrix& rho0) {
    run.params.validate();
    const FockDims dims = rho0.dims();
    if (dims.total() > run.max_total_dim) {
        std::ostringstream msg;
        msg << "total Fock dimension " << dims.total()
            << " exceeds the configured budget " << run.max_total_dim;
        throw config_error(msg.str());
    }
    if (run.n_samples < 2) throw config_error("oracle n_samples must be >= 2");
    if (!(run.t_max > 0.0) || !(run.dt > 0.0))
        throw config_error("oracle t_max and dt must be positive");

    // RK4 stability gate on the spectral scale of the truncated generator
    const double scale =
        2.0 * run.params.kappa * (dims.n_a + dims.n_b) +
        2.0 * run.params.j_coupling * std::sqrt((double)dims.n_a * dims.n_b) +
        0.5 * run.params.chi * dims.n_b * dims.n_b;
    if (run.dt * scale > 2.5) {
        std::ostringstream msg;
        msg << "dt * spectral_scale = " << run.dt * scale
            << " > 2.5; reduce dt below " << 2.5 / scale;
        throw stability_error(msg.str());
    }

    const int D = dims.total();
    const size_t n_elem = static_cast<size_t>(D) * D;
    const int workers = resolve_workers(run.workers, D);
    const Stencil st(run.params, dims);

    std::vector<cplx> rho(rho0.data(), rho0.data() + n_elem);
    std::vector<cplx> acc(n_elem), stage(n_elem), k(n_elem);

    const double seg = run.t_max / (run.n_samples - 1);
    const int steps_per = std::max(1, (int)std::llround(seg / run.dt));
    const double h = seg / steps_per;

    OracleResult result;
    result.dt = h;
    result.samples.reserve(run.n_samples);

    DensityMatrix snap(dims);
    const auto record = [&](double t) {
        std::copy(rho.begin(), rho.end(), snap.data());
        OracleSample s;
        s.t = t;
        extract_moments(snap, s.m);
        s.trace_drift = std::abs(snap.trace_real() - 1.0);
        s.leakage = snap.leakage();
        s.herm_error = snap.hermiticity_error();
        result.samples.push_back(s);
    };

    const auto rhs_into = [&](const std::vector<cplx>& src, std::vector<cplx>& dst) {
        parallel_rows(D, workers, [&](int lo, int hi) {
            st.apply_rows(src.data(), dst.data(), lo, hi);
        });
    };

    record(0.0);
    double t = 0.0;
    for (int sample = 1; sample < run.n_samples; ++sample) {
        for (int step = 0; step < steps_per; ++step) {
            rhs_into(rho, acc);  // k1
            parallel_rows(D, workers, [&](int lo, int hi) {
                const size_t a = static_cast<size_t>(lo) * D, b = static_cast<size_t>(hi) * D;
                for (size_t x = a; x < b; ++x) stage[x] = rho[x] + 0.5 * h * acc[x];
            });
            rhs_into(stage, k);  // k2
            parallel_rows(D, workers, [&](int lo, int hi) {
                const size_t a = static_cast<size_t>(lo) * D, b = static_cast<size_t>(hi) * D;
                for (size_t x = a; x < b; ++x) {
                    acc[x] += 2.0 * k[x];
                    stage[x] = rho[x] + 0.5 * h * k[x];
                }
            });
            rhs_into(stage, k);  // k3
            parallel_rows(D, workers, [&](int lo, int hi) {
                const size_t a = static_cast<size_t>(lo) * D, b = static_cast<size_t>(hi) * D;
                for (size_t x = a; x < b; ++x) {
                    acc[x] += 2.0 * k[x];
                    stage[x] = rho[x] + h * k[x];
                }
            });
            rhs_into(stage, k);  // k4
            parallel_rows(D, workers, [&](int lo, int hi) {
                const size_t a = static_cast<size_t>(lo) * D, b = static_cast<size_t>(hi) * D;
                for (size_t x = a; x < b; ++x)
                    rho[x] += h / 6.0 * (acc[x] + k[x]);
            });
            t += h;
            const double leak = diag_leakage(rho.data(), dims.n_a, dims.n_b);
            if (leak > run.leak_threshold) {
                result.status = OracleStatus::truncation_exceeded;
                result.t_fail = t;
                return result;
            }
        }
        record(sample * seg);
    }
    return result;
}

OracleResult evolve_coherent(const OracleRun& run, cplx alpha0, cplx beta0) {
    const DensityMatrix rho0 = product_coherent_density(alpha0, beta0, run.dims);
    return evolve(run, rho0);
}

}  // namespace ptkerr
