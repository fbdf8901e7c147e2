#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "scatspec/discretize.hpp"
#include "scatspec/fit.hpp"
#include "scatspec/geometry.hpp"
#include "scatspec/spectral.hpp"

namespace scatspec {

/// Rayleigh quotient  (sum_j flux_j (u_{j+1} - u_j)^2 + sum_i pot_i u_i^2) / sum_i den_i u_i^2
/// over vectors u_0..u_{k-1} with u_{-1} = u_k = 0. flux has k + 1 entries.
struct QuotientProblem {
    std::vector<double> flux;
    std::vector<double> pot;
    std::vector<double> den;

    int size() const { return static_cast<int>(den.size()); }
    /// D^{-1/2} N D^{-1/2}; its smallest eigenvalue is the quotient infimum.
    SymTridiag reduced() const;
    double numerator(const Eigen::VectorXd& u) const;
    double denominator(const Eigen::VectorXd& u) const;
};

double quotient_min(const QuotientProblem& q);

/// ||x^{2+s} u'||^2_mu / ||x^{1+s} u||^2_mu with dmu = x^{-n-1} dx on [1/ratio, 1],
/// discretized on a grid uniform in log x with N nodes.
QuotientProblem hardy_problem(int n, double s, double ratio, int N);

struct HardyResult {
    int n = 0;
    double s = 0.0;
    double ratio = 0.0;
    int N = 0;
    double kappa = 0.0;
    double sharp = 0.0;  ///< ((n-2-2s)/2)^2
};

/// Throws ParameterError for s >= (n-2)/2.
HardyResult hardy_rayleigh_min(int n, double s, double ratio, int N);

/// Per-mode quotient ||x^s grad u||^2 / ||x^{1+s+eps} u||^2 on the model.
QuotientProblem poincare_problem(const ManifoldModel& model, const RadialGrid& grid, double lambda, double s,
                                 double eps);

/// inf ||x^s grad u||^2 / ||x^{1+s} u||^2 over the model's angular modes.
/// Throws ParameterError unless 0 <= s < (n-2)/2.
double poincare_min(const ManifoldModel& model, const RadialGrid& grid, double s);

/// Same quotient for the (l, l') form: weights x^{n/2-l} on grad u and
/// x^{1+n/2-l'} on u. Throws ParameterError unless l > 1 and l > l'.
double poincare_lemma_min(const ManifoldModel& model, const RadialGrid& grid, double l, double l_prime);

/// Seeded smooth radial bumps on interior nodes, supported inside the grid.
std::vector<Eigen::VectorXd> random_bumps(const RadialGrid& grid, int count, std::uint64_t seed);

/// max over samples of ||x^theta u|| / (||grad u||^theta ||u||^{1-theta}) for the
/// lambda = 0 mode. Throws DomainError for theta outside [0, 1] or a zero sample.
double interpolation_check(const ManifoldModel& model, const RadialGrid& grid, double theta,
                           const std::vector<Eigen::VectorXd>& samples);

/// inf ||P u||^2 / (||x^2 u||^2 + ||x^2 r d_r u||^2 + lambda ||x^2 (r/w) u||^2) over the
/// model's modes. Throws ParameterError for n < 5.
double vb_lower_bound(const ManifoldModel& model, const RadialGrid& grid, std::uint64_t seed = 1);

/// L = x^{2+sigma} (r d_r)^order.
struct GainFit {
    std::vector<double> H;
    std::vector<double> value;
    std::vector<int> rank;
    std::vector<double> skipped;
    LogFit fit;
    bool fitted = false;
};

/// sup over u in ran chi_I(H^2 P) of |<L u, u>| / ||u||^2 (largest singular
/// value of the window compression), aggregated over modes, fitted against H.
GainFit weighted_gain_fit(const ManifoldModel& model, const SpectralWindow& I, double sigma, int order,
                          const std::vector<double>& H_list, double q = 8.3, double h = 0.1);

}  // namespace scatspec
