#ifndef PTKERR_TYPES_HPP
#define PTKERR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace ptkerr {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Symmetry regime of the linear coupler, classified from kappa vs J.
enum class Regime { pt_symmetric, broken, exceptional };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::pt_symmetric: return "PT_SYMMETRIC";
        case Regime::broken: return "BROKEN";
        case Regime::exceptional: return "EXCEPTIONAL";
    }
    return "?";
}

// Thrown when an analytic operation is requested outside its regime of
// validity (e.g. the broken-regime closed forms in the PT phase, or any
// analytic evaluation at the exceptional point kappa = J).
struct regime_error : std::domain_error {
    explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

// Invalid parameters or configuration input.
struct config_error : std::invalid_argument {
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// Fock-space leakage exceeded the configured threshold during an oracle run.
struct truncation_error : std::runtime_error {
    truncation_error(const std::string& what, double t)
        : std::runtime_error(what), t_fail(t) {}
    double t_fail;
};

// RK4 step size too large for the spectral scale of the truncated generator.
struct stability_error : std::runtime_error {
    explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical quadrature failed to reach its tolerance within the panel cap.
struct quadrature_error : std::runtime_error {
    quadrature_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

// Mean-field trajectory blew past the overflow guard.
struct divergence_error : std::runtime_error {
    divergence_error(const std::string& what, double t)
        : std::runtime_error(what), t_blowup(t) {}
    double t_blowup;
};

// Denominator underflow (change ratio) or degenerate normalization (D3).
struct undefined_value_error : std::domain_error {
    explicit undefined_value_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace ptkerr

#endif
