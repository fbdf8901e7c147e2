#include <doctest.h>

#include <cmath>
#include <vector>

#include "scatspec/errors.hpp"
#include "scatspec/wave.hpp"

using namespace scatspec;

namespace {

ManifoldModel flat(std::vector<AngularMode> modes = {{0.0, 1}, {2.0, 3}}) {
    ManifoldModel m;
    m.angular_spectrum = std::move(modes);
    return m;
}

double max_diff(const WaveField& a, const WaveField& b) {
    double d = 0.0;
    for (std::size_t q = 0; q < a.u.size(); ++q) {
        d = std::max(d, (a.u[q] - b.u[q]).cwiseAbs().maxCoeff());
        d = std::max(d, (a.ut[q] - b.ut[q]).cwiseAbs().maxCoeff());
    }
    return d;
}

double max_abs(const WaveField& a) {
    double d = 0.0;
    for (std::size_t q = 0; q < a.u.size(); ++q) d = std::max({d, a.u[q].cwiseAbs().maxCoeff(), a.ut[q].cwiseAbs().maxCoeff()});
    return d;
}

}  // namespace

TEST_CASE("eigenvector data gives a Kronecker spike") {
    const ManifoldModel m = flat({{0.0, 1}});
    const RadialGrid g = build_grid(m, 20.0, 200);
    const WaveState probe = synthesize(m, g, {Eigen::VectorXd::Zero(g.interior())}, {Eigen::VectorXd::Zero(g.interior())});
    const Eigen::VectorXd e = probe.modes[0].sd.vectors.col(5);
    const WaveState st = synthesize(m, g, {e}, {Eigen::VectorXd::Zero(g.interior())});
    for (int j = 0; j < st.modes[0].c.size(); ++j) CHECK(st.modes[0].c[j] == doctest::Approx(j == 5 ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
    // single-mode solution cos(sqrt(mu) t) e
    const double mu = st.modes[0].sd.values[5];
    const WaveField f = evolve(st, 1.7);
    CHECK((f.u[0] - std::cos(std::sqrt(mu) * 1.7) * e).cwiseAbs().maxCoeff() <= 1e-12 * e.cwiseAbs().maxCoeff());
}

TEST_CASE("Parseval and reconstruction") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 30.0, 600);
    const WaveState st = synthesize_initial_data(m, g, BumpSpec{});
    const Eigen::VectorXd b = bump_profile(g, 2.0, 4.0);
    CHECK(reconstruction_error(st, {b, b}) <= 1e-10);
    const double nb = weighted_norm(b, g.interior_weights());
    CHECK(st.modes[0].c.squaredNorm() == doctest::Approx(nb * nb).epsilon(1e-8));
}

TEST_CASE("reflected data excite only one parity class") {
    // on the cone with n = 3, v = r u turns P into -d^2/dr^2; data odd about the midpoint in v
    // are orthogonal to the even eigenfunctions j = 1, 3, 5, ...
    const ManifoldModel m = flat({{0.0, 1}});
    const RadialGrid g = build_grid(m, 21.0, 2001);
    const double mid = 11.0;
    Eigen::VectorXd u(g.interior());
    for (int i = 0; i < g.interior(); ++i) {
        const double r = g.r[i + 1];
        const double z = (r - mid) / 2.0;
        u[i] = z * std::exp(-z * z) / r;
    }
    const WaveState st = synthesize(m, g, {u}, {Eigen::VectorXd::Zero(g.interior())});
    const Eigen::VectorXd& c = st.modes[0].c;
    double even = 0.0, odd = 0.0;
    for (int j = 0; j < 40; ++j) (j % 2 == 0 ? even : odd) = std::max(j % 2 == 0 ? even : odd, std::abs(c[j]));
    CHECK(even <= 1e-4 * odd);
}

TEST_CASE("evolution invariants") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 30.0, 600);
    BumpSpec spec;
    spec.velocity_weight = 0.3;
    const WaveState st = synthesize_initial_data(m, g, spec);
    const WaveField f0 = evolve(st, 0.0);
    const Eigen::VectorXd b = bump_profile(g, 2.0, 4.0);
    CHECK((f0.u[0] - b).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((f0.ut[1] - 0.3 * b).cwiseAbs().maxCoeff() <= 1e-10);

    const double E0 = total_energy(m, st, f0);
    for (double t : {0.5, 3.0, 11.0, 20.0}) {
        const WaveField f = evolve(st, t);
        CHECK(std::abs(total_energy(m, st, f) - E0) <= 1e-8 * E0);
        // run backwards from the state at t
        const WaveState back = synthesize(m, g, f.u, f.ut);
        CHECK(max_diff(evolve(back, -t), f0) <= 1e-10 * max_abs(f0));
    }
}

TEST_CASE("superposition") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 30.0, 600);
    const Eigen::VectorXd a = bump_profile(g, 2.0, 4.0), b = bump_profile(g, 5.0, 8.0);
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(g.interior());
    const WaveState sa = synthesize(m, g, {a, z}, {z, b});
    const WaveState sb = synthesize(m, g, {b, a}, {a, z});
    const WaveState sab = synthesize(m, g, {a + 2 * b, z + 2 * a}, {z + 2 * a, b});
    const WaveField fa = evolve(sa, 4.2), fb = evolve(sb, 4.2), fab = evolve(sab, 4.2);
    WaveField sum = fa;
    for (std::size_t q = 0; q < sum.u.size(); ++q) {
        sum.u[q] += 2 * fb.u[q];
        sum.ut[q] += 2 * fb.ut[q];
    }
    CHECK(max_diff(sum, fab) <= 1e-10 * max_abs(fab));
}

TEST_CASE("weighted energy") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 40.0, 800);
    const WaveState st = synthesize_initial_data(m, g, BumpSpec{});
    WaveField zero = evolve(st, 0.0);
    for (auto& v : zero.u) v.setZero();
    for (auto& v : zero.ut) v.setZero();
    CHECK(weighted_energy(m, st, zero, 1.0) == 0.0);
    for (double t : {0.0, 2.0, 9.0}) {
        const WaveField f = evolve(st, t);
        CHECK(weighted_energy(m, st, f, 1.0) <= weighted_energy(m, st, f, 0.5));
        CHECK(weighted_energy(m, st, f, 0.5) >= 0.0);
    }
    CHECK_THROWS_AS(weighted_energy(m, st, zero, 0.0), ParameterError);
    CHECK_THROWS_AS(weighted_energy(m, st, zero, 1.5), ParameterError);

    // data concentrated near r0: weighted energy close to (r_min / r0)^{2 mu} E
    const double r0 = 20.0;
    const WaveState far = synthesize_initial_data(m, g, BumpSpec{r0 - 0.5, r0 + 0.5, {}, 0.0});
    const WaveField ff = evolve(far, 0.0);
    for (double mu : {0.5, 1.0}) {
        const double expect = std::pow(1.0 / r0, 2 * mu) * total_energy(m, far, ff);
        CHECK(weighted_energy(m, far, ff, mu) == doctest::Approx(expect).epsilon(0.1));
    }
}

TEST_CASE("finite propagation speed") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 40.0, 1600);
    const WaveState st = synthesize_initial_data(m, g, BumpSpec{});
    const double E = total_energy(m, st, evolve(st, 0.0));
    const double delta = 4 * g.h;
    for (double t : {1.0, 5.0, 12.0}) {
        const WaveField f = evolve(st, t);
        CHECK(energy_outside(m, st, f, 2.0 - t - delta, 4.0 + t + delta) <= 1e-4 * E);
    }
}

TEST_CASE("local energy integral") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 40.0, 800);
    const DecayFit d = decay_rate_fit(m, g, 1.0, 0.0, {4, 8, 12, 16}, BumpSpec{});
    for (std::size_t k = 1; k < d.Q.size(); ++k) CHECK(d.Q[k] >= d.Q[k - 1]);
    CHECK(d.energy_drift <= 1e-8);
    CHECK(d.rate_exponent == 0.0);
    CHECK_THROWS_AS(decay_rate_fit(m, g, 1.0, 0.0, {8, 16, 32}, BumpSpec{}), ResolutionError);
    CHECK_THROWS_AS(decay_rate_fit(m, g, 1.0, 0.0, {4, 8, 12, 16}, BumpSpec{}, 0.3), ParameterError);
    CHECK(decay_rate_fit(m, g, 0.25, 0.05, {4, 8, 12, 16}, BumpSpec{}).rate_exponent == doctest::Approx(0.4));
}

TEST_CASE("initial data validation") {
    const ManifoldModel m = flat();
    const RadialGrid g = build_grid(m, 30.0, 100);
    CHECK_THROWS_AS(synthesize_initial_data(m, g, BumpSpec{2.0, 2.5, {}, 0.0}), ResolutionError);
    CHECK_THROWS_AS(synthesize_initial_data(m, g, BumpSpec{25.0, 35.0, {}, 0.0}), ResolutionError);
    CHECK_THROWS_AS(synthesize_initial_data(m, g, BumpSpec{2.0, 4.0, {1.0}, 0.0}), ParameterError);
}
