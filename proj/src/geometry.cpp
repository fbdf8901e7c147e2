#include "scatspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scatspec/errors.hpp"

namespace scatspec {

namespace {

void require_domain(const ManifoldModel& model, double r, const char* what) {
    if (!(r >= model.r_min)) {
        std::ostringstream os;
        os << what << ": r = " << r << " lies below r_min = " << model.r_min;
        throw DomainError(os.str());
    }
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

void ManifoldModel::validate() const {
    std::ostringstream errs;
    if (n < 3) errs << "n must satisfy n >= 3 (all weighted estimates assume n >= 3); ";
    if (!(r_min > 0.0)) errs << "r_min must be positive; ";
    if (!(rho > 0.0)) errs << "rho must be positive (perturbation decay order); ";
    if (!(potential.v0 >= 0.0)) errs << "potential.v0 must be >= 0 (V >= 0 is assumed); ";
    if (!(potential.rho_prime >= rho))
        errs << "potential.rho_prime must satisfy rho_prime >= rho (V in S^{-2-rho}); ";
    if (!cutoff.identically_one && !(r_min < cutoff.r0 && cutoff.r0 < cutoff.r1))
        errs << "cutoff must satisfy r_min < r0 < r1; ";
    switch (warp.family) {
        case WarpFamily::flat: break;
        case WarpFamily::decay:
            if (!(1.0 + warp.c * std::pow(1.0 + r_min, -rho) > 0.0))
                errs << "warp.c makes w(r) nonpositive; ";
            break;
        case WarpFamily::trapping:
            if (!(warp.c >= 0.0) || !(warp.width > 0.0))
                errs << "trapping warp needs c >= 0 and width > 0; ";
            break;
    }
    if (angular_spectrum.empty()) {
        errs << "angular spectrum is empty; ";
    } else {
        if (angular_spectrum.front().lambda != 0.0) errs << "angular spectrum must contain lambda_0 = 0; ";
        for (std::size_t k = 0; k < angular_spectrum.size(); ++k) {
            if (angular_spectrum[k].lambda < 0.0) errs << "angular eigenvalues must be >= 0; ";
            if (angular_spectrum[k].multiplicity < 1) errs << "multiplicities must be >= 1; ";
            if (k > 0 && angular_spectrum[k].lambda < angular_spectrum[k - 1].lambda)
                errs << "angular eigenvalues must be sorted ascending; ";
        }
    }
    const std::string msg = errs.str();
    if (!msg.empty()) throw ParameterError("invalid manifold model: " + msg);
}

std::vector<AngularMode> sphere_spectrum(int n, int k_max) {
    if (n < 2) throw ParameterError("sphere_spectrum needs n >= 2");
    std::vector<AngularMode> out;
    for (int k = 0; k <= k_max; ++k) {
        // harmonic polynomials of degree k in n variables
        const double mult = binomial(k + n - 1, n - 1) - binomial(k + n - 3, n - 1);
        out.push_back({static_cast<double>(k) * (k + n - 2), static_cast<int>(std::lround(mult))});
    }
    return out;
}

Jet eval_warp(const ManifoldModel& model, double r) {
    require_domain(model, r, "eval_warp");
    const Warp& w = model.warp;
    switch (w.family) {
        case WarpFamily::flat: return {r, 1.0, 0.0};
        case WarpFamily::decay: {
            const double rho = model.rho;
            const double p0 = std::pow(1.0 + r, -rho);
            const double p1 = p0 / (1.0 + r);
            const double p2 = p1 / (1.0 + r);
            return {r * (1.0 + w.c * p0), 1.0 + w.c * (p0 - rho * r * p1),
                    w.c * (-2.0 * rho * p1 + rho * (rho + 1.0) * r * p2)};
        }
        case WarpFamily::trapping: {
            const double z = (r - w.center) / w.width;
            const double g = std::exp(-z * z);
            const double g1 = -2.0 * z / w.width * g;
            const double g2 = (4.0 * z * z - 2.0) / (w.width * w.width) * g;
            return {r * (1.0 + w.c * g), 1.0 + w.c * (g + r * g1), w.c * (2.0 * g1 + r * g2)};
        }
    }
    return {};
}

Jet eval_potential(const ManifoldModel& model, double r) {
    require_domain(model, r, "eval_potential");
    const double v0 = model.potential.v0;
    if (v0 == 0.0) return {};
    const double a = 2.0 + model.potential.rho_prime;
    const double p = v0 * std::pow(1.0 + r, -a);
    return {p, -a * p / (1.0 + r), a * (a + 1.0) * p / ((1.0 + r) * (1.0 + r))};
}

Jet smooth_step(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    // s = 1 / (1 + exp(z)), z = 1/t - 1/(1-t)
    const double u = 1.0 - t;
    const double z = 1.0 / t - 1.0 / u;
    double s = 0.0, s1ms = 0.0;
    if (z > 0.0) {
        const double e = std::exp(-z);
        s = e / (1.0 + e);
        s1ms = e / ((1.0 + e) * (1.0 + e));
    } else {
        const double e = std::exp(z);
        s = 1.0 / (1.0 + e);
        s1ms = e / ((1.0 + e) * (1.0 + e));
    }
    const double q = 1.0 / (t * t) + 1.0 / (u * u);
    const double dq = -2.0 / (t * t * t) + 2.0 / (u * u * u);
    const double d1 = s1ms * q;
    const double d2 = (1.0 - 2.0 * s) * d1 * q + s1ms * dq;
    return {s, d1, d2};
}

Jet eval_cutoff_phi(const ManifoldModel& model, double r) {
    require_domain(model, r, "eval_cutoff_phi");
    if (model.cutoff.identically_one) return {1.0, 0.0, 0.0};
    const double len = model.cutoff.r1 - model.cutoff.r0;
    const Jet s = smooth_step((r - model.cutoff.r0) / len);
    return {s.value, s.d1 / len, s.d2 / (len * len)};
}

void WeightFunction::validate(int n) const {
    std::ostringstream errs;
    if (!(t0 > 0.0 && t0 < 0.5)) errs << "t0 must satisfy 0 < t0 < 1/2; ";
    if (!(s > 0.0 && s < 0.5 * (n - 2))) errs << "s must satisfy 0 < s < (n-2)/2; ";
    if (!(eps > 0.0)) errs << "eps must be positive; ";
    const std::string msg = errs.str();
    if (!msg.empty()) throw ParameterError("invalid weight function: " + msg);
}

Jet weight_g(double t, double t0) {
    if (t < 0.0) throw DomainError("weight_g: t must be >= 0");
    const double chi0 = std::exp(-1.0 / t0);
    if (t >= t0) return {chi0, 0.0, 0.0};
    const double d = t - t0;
    const double chi = std::exp(1.0 / d);
    const double d2 = d * d;
    return {chi0 - chi, chi / d2, chi / (d2 * d2) * (-1.0 - 2.0 * d)};
}

BJet weight_f(double x, const WeightFunction& weight, int n) {
    weight.validate(n);
    if (!(x > 0.0)) throw DomainError("weight_f: x must be positive");
    const double t = x / weight.eps;
    const Jet g = weight_g(t, weight.t0);
    const double two_s = 2.0 * weight.s;
    const double f = std::pow(g.value, two_s);
    if (t >= weight.t0) return {f, 0.0, 0.0};
    // d_t f = 2s g^{2s-1} g', d_t^2 f = 2s (2s-1) g^{2s-2} g'^2 + 2s g^{2s-1} g''
    const double gm1 = std::pow(g.value, two_s - 1.0);
    const double gm2 = std::pow(g.value, two_s - 2.0);
    const double df = two_s * gm1 * g.d1;
    const double d2f = two_s * (two_s - 1.0) * gm2 * g.d1 * g.d1 + two_s * gm1 * g.d2;
    return {f, t * df, t * df + t * t * d2f};
}

WeightPositivity model_weight_positivity(int n, const WeightFunction& weight,
                                         std::span<const double> t_grid) {
    weight.validate(n);
    WeightPositivity out;
    out.nonnegative = out.g_concave = out.t_dg_below_g = true;
    out.min_full = out.min_reduced = std::numeric_limits<double>::infinity();
    const double s = weight.s;
    for (double t : t_grid) {
        if (!(t >= 0.0 && t < weight.t0))
            throw DomainError("model_weight_positivity: grid points must lie in [0, t0)");
        const Jet g = weight_g(t, weight.t0);
        double full = 0.0, reduced = 0.0;
        if (t > 0.0) {
            const double pre = 2.0 * s * std::pow(g.value, 2.0 * s - 2.0);
            full = pre * (-(2.0 * s - 1.0) * t * t * g.d1 * g.d1 + (n - 3.0) * t * g.value * g.d1 -
                          t * t * g.value * g.d2);
            reduced = pre * ((n - 2.0 * s - 2.0) * t * g.d1 * g.value - t * t * g.value * g.d2);
        }
        out.t.push_back(t);
        out.full.push_back(full);
        out.reduced.push_back(reduced);
        out.min_full = std::min(out.min_full, full);
        out.min_reduced = std::min(out.min_reduced, reduced);
        if (full < 0.0 || reduced < 0.0) out.nonnegative = false;
        // exp(1/(t - t0)) underflows near t0, leaving g' = g'' = 0 exactly
        const bool underflow = g.d1 == 0.0 && g.d2 == 0.0 && t > 0.0;
        if (!(g.d2 < 0.0) && !underflow) out.g_concave = false;
        if (t * g.d1 > g.value) out.t_dg_below_g = false;
    }
    return out;
}

SymbolDecay check_symbol_decay(const std::function<Jet(double)>& fn, double order,
                               std::span<const double> r_grid) {
    SymbolDecay out;
    for (double r : r_grid) {
        const Jet j = fn(r);
        const double wt = std::pow(r, order);
        const double b1 = r * j.d1;
        const double b2 = r * j.d1 + r * r * j.d2;
        out.sup0 = std::max(out.sup0, std::abs(j.value) * wt);
        out.sup1 = std::max(out.sup1, std::abs(b1) * wt);
        out.sup2 = std::max(out.sup2, std::abs(b2) * wt);
    }
    return out;
}

SymbolDecayReport check_symbol_decay_extended(const std::function<Jet(double)>& fn, double order,
                                              double r_lo, double r_hi, int points, double growth) {
    if (points < 2 || !(r_hi > r_lo)) throw DomainError("check_symbol_decay: bad grid");
    auto make = [&](double hi) {
        std::vector<double> g(points);
        for (int i = 0; i < points; ++i) g[i] = r_lo + (hi - r_lo) * i / (points - 1);
        return g;
    };
    SymbolDecayReport rep;
    const auto base = make(r_hi);
    const auto ext = make(r_lo + 2.0 * (r_hi - r_lo));
    rep.base = check_symbol_decay(fn, order, base);
    rep.extended = check_symbol_decay(fn, order, ext);
    auto ok = [&](double b, double e) {
        return std::isfinite(e) && e <= growth * b + 1e-12 * std::max(1.0, std::abs(b));
    };
    rep.bounded = ok(rep.base.sup0, rep.extended.sup0) && ok(rep.base.sup1, rep.extended.sup1) &&
                  ok(rep.base.sup2, rep.extended.sup2);
    return rep;
}

}  // namespace scatspec
