#pragma once

#include <vector>

#include "scatspec/discretize.hpp"
#include "scatspec/geometry.hpp"

namespace scatspec {

/// Delta_g f on the interior nodes for the weight f = g(x/eps)^{2s}, using the
/// lambda = 0 flux-form operator without potential and the true boundary values of f.
struct LaplacianOnF {
    std::vector<double> r;
    std::vector<double> value;
    double collar_start = 0.0;  ///< r_min / (eps t0); f is constant for r below it
    double min = 0.0;
    double tol_pos = 0.0;       ///< (4/3) max |coarse - fine| from the h, h/2 pair
    bool nonnegative = false;   ///< min >= -tol_pos
};

/// Throws ResolutionError unless r_max >= 2 collar_start with at least 32 nodes in [collar_start, 2 collar_start].
LaplacianOnF full_laplacian_on_f(const ManifoldModel& model, const WeightFunction& weight, const RadialGrid& grid);

struct EpsThreshold {
    std::vector<double> eps;
    std::vector<double> min;
    std::vector<bool> nonnegative;
    bool found = false;
    double eps0 = 0.0;  ///< largest eps in the scan below which every sample is nonnegative
};

/// Scans eps geometrically downward from eps_hi (factor 1/2, `steps` values), each on
/// the grid [r_min, 4 collar_start] with the given spacing.
EpsThreshold locate_eps0(const ManifoldModel& model, WeightFunction weight, double eps_hi, int steps, double h);

}  // namespace scatspec
