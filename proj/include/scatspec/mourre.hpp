#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "scatspec/discretize.hpp"
#include "scatspec/fit.hpp"
#include "scatspec/geometry.hpp"
#include "scatspec/quadrature.hpp"
#include "scatspec/spectral.hpp"

namespace scatspec {

/// Grid rule shared by all window computations: r_max = r_min + pi H q / sqrt(inf I).
struct WindowGridRule {
    double q = 8.3;
    double h = 0.1;
};

struct SandwichResult {
    double H = 0.0;
    bool empty = true;
    int rank = 0;
    double c = 0.0;             ///< min eigenvalue of chi_I K_H chi_I on ran chi_I
    double min_window_t = 0.0;  ///< smallest H^2 mu in the window
    double deviation = 0.0;     ///< ||chi_I H^2 (K - P) chi_I||
    double asymmetry = 0.0;     ///< max |S - S^T| of the sandwich matrix before symmetrizing
};

/// Sandwich of the flux-form commutator on an explicit grid; min over the model's modes.
SandwichResult mourre_sandwich_min(const ManifoldModel& model, const RadialGrid& grid, const SpectralWindow& I);
SandwichResult mourre_sandwich_min(const ManifoldModel& model, const SpectralWindow& I,
                                   const WindowGridRule& rule = {});

struct MourreScan {
    SpectralWindow I;
    std::vector<SandwichResult> points;
    bool H0_found = false;
    double H0 = 0.0;  ///< smallest scheduled H beyond which c(H) >= inf I / 2
    LogFit fit;       ///< log deviation against log H
    bool fitted = false;
    bool noise_floor = false;  ///< all deviations below 1e-10 inf I (exact model)
};

/// Throws ParameterError for fewer than 4 H values; fewer than 4 nonempty windows leave fitted = false.
MourreScan scan_H(const ManifoldModel& model, const SpectralWindow& I, const std::vector<double>& H_list,
                  const WindowGridRule& rule = {});

struct SqrtMourreResult {
    double H = 0.0;
    bool empty = true;
    int rank = 0;
    double c_sqrt = 0.0;         ///< min eigenvalue of chi_I (i/2)[H sqrt P, A] chi_I
    double c = 0.0;              ///< the H^2 P sandwich minimum at the same H
    double factor = 0.0;         ///< pi^{-1} int lambda^{1/2} (sup I + lambda)^{-2} dlambda by quadrature
    double factor_exact = 0.0;   ///< 1 / (2 sqrt(sup I))
    double quad_vs_eigen = 0.0;  ///< relative difference of the two constructions
};

SqrtMourreResult sqrt_mourre_min(const ManifoldModel& model, const SpectralWindow& I,
                                 const WindowGridRule& rule = {}, const QuadSpec& quad = {});

/// L = x^{1+s} (order 0) or x^{1+s} r d_r (order 1).
struct ResolventGain {
    double s = 0.0;
    std::complex<double> w;
    int order = 0;
    std::vector<double> H;
    std::vector<double> norm;
    LogFit fit;
    bool fitted = false;
};

/// ||L (H^2 P - w)^{-1}|| over the model's modes on [r_min, r_min + r_factor H] with spacing h.
double resolvent_weighted_norm(const ManifoldModel& model, int order, double s, std::complex<double> w, double H,
                               double r_factor = 20.0, double h = 0.1, std::uint64_t seed = 7);

ResolventGain resolvent_gain_fit(const ManifoldModel& model, int order, double s, std::complex<double> w,
                                 const std::vector<double>& H_list, double r_factor = 20.0, double h = 0.1,
                                 std::uint64_t seed = 7);

struct AdjointPoint {
    double H = 0.0;
    int rank = 0;
    double ad1 = 0.0;  ///< ||[A_H, H P^{1/2}]||
    double ad2 = 0.0;  ///< ||[A_H, [A_H, H P^{1/2}]]||
    std::vector<double> mourre1;  ///< || |A_H|^mu x^mu || per mu
    std::vector<double> mourre2;  ///< || <A_H>^mu psi(H^2 P) x^mu || per mu
    double identity_defect = 0.0; ///< [A_H, H P^{1/2}] against i psi^2 H P^{1/2} + B
};

struct AdjointBounds {
    std::vector<double> mu;
    std::vector<AdjointPoint> points;
    double ratio_ad1 = 0.0;
    double ratio_ad2 = 0.0;
    std::vector<LogFit> fit_mourre1;
    std::vector<LogFit> fit_mourre2;
};

/// A_H = psi(H^2 P) A psi(H^2 P) with psi the smooth bump of I; mu in [0, 1].
AdjointBounds adjoint_bounds_check(const ManifoldModel& model, const SpectralWindow& I,
                                   const std::vector<double>& mu_list, const std::vector<double>& H_list,
                                   const WindowGridRule& rule = {}, const QuadSpec& quad = {});

struct ProjectorPoint {
    double H = 0.0;
    std::vector<double> l_psi_xinv;     ///< ||L psi x^{-1}|| for L = x, x r d_r
    std::vector<double> xinv_psi_lstar; ///< ||x^{-1} psi L^*||, the adjoint of the above
    std::vector<double> xinv_psi_l;     ///< ||x^{-1} psi L||
};

struct ConjugateProjector {
    std::vector<ProjectorPoint> points;
    double max_ratio = 0.0;         ///< largest max/min ratio over H across all reported norms
    double max_adjoint_gap = 0.0;   ///< largest relative gap of the adjoint pairs
};

/// psi_scale multiplies the bump (0 gives the zero operator).
ConjugateProjector conjugate_projector_norms(const ManifoldModel& model, const SpectralWindow& I,
                                             const std::vector<double>& H_list, const WindowGridRule& rule = {},
                                             double psi_scale = 1.0);

}  // namespace scatspec
