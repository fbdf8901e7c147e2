#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace scatspec {

/// Value of a scalar function of r together with its first two derivatives.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

enum class WarpFamily {
    flat,      ///< w(r) = r, the exact cone
    decay,     ///< w(r) = r (1 + c (1+r)^{-rho})
    trapping,  ///< w(r) = r (1 + c exp(-((r - center)/width)^2)), non-monotone for large c
};

struct Warp {
    WarpFamily family = WarpFamily::flat;
    double c = 0.0;
    double center = 3.0;  // trapping family only
    double width = 0.7;   // trapping family only
};

/// Eigenvalue of the cross-section Laplacian and its multiplicity.
struct AngularMode {
    double lambda = 0.0;
    int multiplicity = 1;
};

/// V(r) = v0 (1 + r)^{-2 - rho_prime}.
struct Potential {
    double v0 = 0.0;
    double rho_prime = 1.0;
};

/// Collar cutoff phi: 0 on [r_min, r0], 1 on [r1, inf). With identically_one
/// set, phi = 1 everywhere (used for exact-cone dilation checks).
struct Cutoff {
    double r0 = 2.0;
    double r1 = 3.0;
    bool identically_one = false;
};

/// Warped-product scattering metric dr^2 + w(r)^2 h0 on [r_min, inf) x Y with
/// a radial short-range potential. The cross section Y enters only through
/// the spectrum of its Laplacian.
struct ManifoldModel {
    int n = 3;
    double r_min = 1.0;
    Warp warp;
    double rho = 1.0;
    std::vector<AngularMode> angular_spectrum{{0.0, 1}};
    Potential potential;
    Cutoff cutoff;

    /// Throws ParameterError naming the violated hypothesis.
    void validate() const;

    /// Boundary defining function, normalized so that x <= 1 on the manifold.
    double x(double r) const { return r_min / r; }
};

/// lambda_k = k (k + n - 2) with the dimension of degree-k harmonics on S^{n-1}.
std::vector<AngularMode> sphere_spectrum(int n, int k_max);

Jet eval_warp(const ManifoldModel& model, double r);
Jet eval_potential(const ManifoldModel& model, double r);
Jet eval_cutoff_phi(const ManifoldModel& model, double r);

/// C-infinity monotone step on [0,1] built from exp(-1/t); 0 for t <= 0, 1 for t >= 1.
Jet smooth_step(double t);

/// Weight f = g(x/eps)^{2s} from the positive-Laplacian construction.
struct WeightFunction {
    double t0 = 0.4;
    double s = 0.25;
    double eps = 0.1;

    /// Requires 0 < t0 < 1/2 and 0 < s < (n-2)/2.
    void validate(int n) const;
};

/// g(t) = chi(0) - chi(t), chi(t) = exp(1/(t - t0)) for t < t0 and 0 otherwise.
Jet weight_g(double t, double t0);

/// f and its b-derivatives (x d_x) f, (x d_x)^2 f.
struct BJet {
    double f = 0.0;
    double xdx = 0.0;
    double xdx2 = 0.0;
};

BJet weight_f(double x, const WeightFunction& weight, int n);

struct WeightPositivity {
    std::vector<double> t;
    /// 2s g^{2s-2} (-(2s-1) t^2 g'^2 + (n-3) t g g' - t^2 g g'')
    std::vector<double> full;
    /// 2s g^{2s-2} ((n-2s-2) t g' g - t^2 g g''); a lower bound for `full` when s >= 1/2
    std::vector<double> reduced;
    double min_full = 0.0;
    double min_reduced = 0.0;
    bool nonnegative = false;
    bool g_concave = false;     // g'' < 0 on the grid
    bool t_dg_below_g = false;  // t g' <= g on the grid
    bool ok() const { return nonnegative && g_concave && t_dg_below_g; }
};

/// Throws DomainError for t outside [0, t0).
WeightPositivity model_weight_positivity(int n, const WeightFunction& weight,
                                         std::span<const double> t_grid);

struct SymbolDecay {
    double sup0 = 0.0;  // sup |fn| r^order
    double sup1 = 0.0;  // sup |(r d_r) fn| r^order
    double sup2 = 0.0;  // sup |(r d_r)^2 fn| r^order
};

SymbolDecay check_symbol_decay(const std::function<Jet(double)>& fn, double order,
                               std::span<const double> r_grid);

/// Suprema on a grid and on the same grid extended to twice its range; bounded
/// when extending does not grow any supremum by more than `growth`.
struct SymbolDecayReport {
    SymbolDecay base;
    SymbolDecay extended;
    bool bounded = false;
};

SymbolDecayReport check_symbol_decay_extended(const std::function<Jet(double)>& fn, double order,
                                              double r_lo, double r_hi, int points,
                                              double growth = 1.5);

}  // namespace scatspec
