#include "scatspec/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

std::vector<double> laplacian_values(const ManifoldModel& model, const WeightFunction& weight, const RadialGrid& g) {
    const int N = g.N;
    const double h = g.h;
    std::vector<double> f(N);
    for (int i = 0; i < N; ++i) f[i] = weight_f(model.x(g.r[i]), weight, model.n).f;
    auto W = [&](double r) { return std::pow(eval_warp(model, r).value, model.n - 1); };
    std::vector<double> out(N - 2);
    for (int i = 1; i + 1 < N; ++i) {
        const double wm = W(g.r[i] - 0.5 * h);
        const double wp = W(g.r[i] + 0.5 * h);
        out[i - 1] = -(wp * (f[i + 1] - f[i]) - wm * (f[i] - f[i - 1])) / (h * h * W(g.r[i]));
    }
    return out;
}

}  // namespace

LaplacianOnF full_laplacian_on_f(const ManifoldModel& model, const WeightFunction& weight, const RadialGrid& grid) {
    weight.validate(model.n);
    LaplacianOnF out;
    out.collar_start = model.r_min / (weight.eps * weight.t0);
    const double rc = out.collar_start;
    const int in_collar = static_cast<int>(std::count_if(grid.r.begin(), grid.r.end(),
                                                         [rc](double r) { return r >= rc && r <= 2.0 * rc; }));
    if (grid.r_max < 2.0 * rc || in_collar < 32) {
        std::ostringstream os;
        os << "full_laplacian_on_f: collar r >= " << rc << " unresolved (r_max = " << grid.r_max << ", "
           << in_collar << " nodes in [r_c, 2 r_c], need 32)";
        throw ResolutionError(os.str());
    }
    out.r = grid.interior_nodes();
    out.value = laplacian_values(model, weight, grid);
    const RadialGrid fine = build_grid(model, grid.r_max, 2 * grid.N - 1);
    const std::vector<double> fv = laplacian_values(model, weight, fine);
    double diff = 0.0;
    for (std::size_t i = 0; i < out.value.size(); ++i) diff = std::max(diff, std::abs(out.value[i] - fv[2 * i + 1]));
    out.tol_pos = 4.0 / 3.0 * diff;
    out.min = *std::min_element(out.value.begin(), out.value.end());
    out.nonnegative = out.min >= -out.tol_pos;
    return out;
}

EpsThreshold locate_eps0(const ManifoldModel& model, WeightFunction weight, double eps_hi, int steps, double h) {
    if (!(eps_hi > 0.0) || steps < 1 || !(h > 0.0)) throw ParameterError("locate_eps0: needs eps_hi > 0, steps >= 1, h > 0");
    EpsThreshold out;
    double eps = eps_hi;
    for (int k = 0; k < steps; ++k, eps *= 0.5) {
        weight.eps = eps;
        const double rc = model.r_min / (eps * weight.t0);
        const double r_max = 4.0 * rc;
        const int N = static_cast<int>(std::lround((r_max - model.r_min) / h)) + 1;
        const LaplacianOnF lf = full_laplacian_on_f(model, weight, build_grid(model, r_max, N));
        out.eps.push_back(eps);
        out.min.push_back(lf.min);
        out.nonnegative.push_back(lf.nonnegative);
    }
    // eps0: the largest scanned eps with every smaller scanned eps also nonnegative
    for (std::size_t k = out.eps.size(); k-- > 0;) {
        if (!out.nonnegative[k]) break;
        out.found = true;
        out.eps0 = out.eps[k];
    }
    return out;
}

}  // namespace scatspec
