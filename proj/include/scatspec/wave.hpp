#pragma once

#include <vector>

#include <Eigen/Dense>

#include "scatspec/discretize.hpp"
#include "scatspec/fit.hpp"
#include "scatspec/geometry.hpp"
#include "scatspec/spectral.hpp"

namespace scatspec {

/// Radial bump exp(4 - 1/(t(1-t))), t = (r - r_a)/(r_b - r_a), placed in each angular
/// mode with the given weight. Empty mode_weights puts weight 1 on every mode.
/// Each mode carries a single angular harmonic (multiplicity is not summed).
struct BumpSpec {
    double r_a = 2.0;
    double r_b = 4.0;
    std::vector<double> mode_weights;
    double velocity_weight = 0.0;  ///< u_1 = velocity_weight * u_0
};

struct ModeState {
    double lambda = 0.0;
    SpectralData sd;
    Eigen::VectorXd c;  ///< <u_0, e_j>_m
    Eigen::VectorXd d;  ///< <u_1, e_j>_m
    std::vector<double> w;  ///< warp at the interior nodes
};

struct WaveState {
    RadialGrid grid;
    std::vector<ModeState> modes;
};

/// u and u_t per mode at a fixed time.
struct WaveField {
    double t = 0.0;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> ut;
};

/// Expands explicit per-mode data (u_0, u_1) in the full eigenbasis of each mode.
WaveState synthesize(const ManifoldModel& model, const RadialGrid& grid, const std::vector<Eigen::VectorXd>& u0,
                     const std::vector<Eigen::VectorXd>& u1);

/// Throws ResolutionError when the bump is narrower than 4h or leaves (r_min, r_max).
WaveState synthesize_initial_data(const ManifoldModel& model, const RadialGrid& grid, const BumpSpec& spec);

/// Bump values on the interior nodes.
Eigen::VectorXd bump_profile(const RadialGrid& grid, double r_a, double r_b);

/// max over modes of ||u_0 - sum c_j e_j||_m / ||u_0||_m for the data passed to synthesize.
double reconstruction_error(const WaveState& state, const std::vector<Eigen::VectorXd>& u0);

WaveField evolve(const WaveState& state, double t);

/// ||u_t||_m^2 + <P u, u>_m summed over modes, P applied as an operator (not spectrally).
double total_energy(const ManifoldModel& model, const WaveState& state, const WaveField& field);

/// sum over modes of int x^{2 mu} (|u_t|^2 + |d_r u|^2 + lambda |u|^2 / w^2) dg. The derivative
/// term is summed over all N - 1 cells with Dirichlet end values. Throws ParameterError unless 0 < mu <= 1.
double weighted_energy(const ManifoldModel& model, const WaveState& state, const WaveField& field, double mu);

/// Energy density (same integrand with mu = 0, including V) outside [lo, hi].
double energy_outside(const ManifoldModel& model, const WaveState& state, const WaveField& field, double lo,
                      double hi);

struct DecayFit {
    double mu = 0.0;
    double eps = 0.0;
    double rate_exponent = 0.0;  ///< 1 - 2 mu - 2 eps for mu <= 1/2, 0 otherwise
    std::vector<double> T;
    std::vector<double> Q;
    LogFit fit;
    bool fitted = false;
    double plateau_ratio = 0.0;  ///< Q(T_max) / Q(T_max / 2)
    double energy_drift = 0.0;   ///< max |E(t) - E(0)| / E(0) over the samples
    std::vector<double> t;
    std::vector<double> density;  ///< ||x^mu u'(t)||^2
    std::vector<double> energy;   ///< E(t)
};

/// Q(T) = int_0^T ||x^mu u'(t)||^2 dt by composite Simpson with step dt; every T and T_max/2
/// must be an even multiple of dt. Throws ResolutionError when r_max < r_b + T_max + margin.
DecayFit decay_rate_fit(const ManifoldModel& model, const RadialGrid& grid, double mu, double eps,
                        const std::vector<double>& T_list, const BumpSpec& data, double dt = 0.1,
                        double margin = 8.0);

/// Same, reusing an already synthesized state.
DecayFit decay_rate_fit(const ManifoldModel& model, const WaveState& state, double mu, double eps,
                        const std::vector<double>& T_list, double r_b, double dt = 0.1, double margin = 8.0);

/// Trapping negative control: warp r(1 + 2 exp(-((r-3)/0.7)^2)), modes {0, 110}, data on mode 110 only.
ManifoldModel trapping_control_model(const ManifoldModel& base);
BumpSpec trapping_control_data(const BumpSpec& base);

}  // namespace scatspec
