#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "scatspec/errors.hpp"
#include "scatspec/inequalities.hpp"

using namespace scatspec;

namespace {

// Dense numerator and denominator of a quotient problem.
void dense_forms(const QuotientProblem& q, Eigen::MatrixXd& N, Eigen::MatrixXd& D) {
    const int k = q.size();
    N = Eigen::MatrixXd::Zero(k, k);
    D = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j <= k; ++j) {
        // flux_j (u_j - u_{j-1})^2 in 0-based interior indices
        const int a = j - 1, b = j;
        if (a >= 0) N(a, a) += q.flux[j];
        if (b < k) N(b, b) += q.flux[j];
        if (a >= 0 && b < k) {
            N(a, b) -= q.flux[j];
            N(b, a) -= q.flux[j];
        }
    }
    for (int i = 0; i < k; ++i) {
        N(i, i) += q.pot[i];
        D(i, i) = q.den[i];
    }
}

ManifoldModel cone(int n, std::vector<AngularMode> modes = {{0.0, 1}}) {
    ManifoldModel m;
    m.n = n;
    m.angular_spectrum = std::move(modes);
    return m;
}

}  // namespace

TEST_CASE("sharp Hardy constants") {
    struct Case {
        int n;
        double s, sharp;
    };
    for (const Case c : {Case{3, 0.0, 0.25}, Case{4, 0.5, 0.25}, Case{5, 0.0, 2.25}, Case{5, 1.0, 0.25}}) {
        const HardyResult r = hardy_rayleigh_min(c.n, c.s, 1e4, 4096);
        CHECK(r.sharp == doctest::Approx(c.sharp).epsilon(1e-15));
        CHECK(r.kappa >= r.sharp - 1e-8);
        // truncated continuum value sharp + (pi / ln R)^2
        CHECK(r.kappa == doctest::Approx(oracle::hardy_truncated(c.n, c.s, 1e4)).epsilon(1e-4));
    }
    CHECK_THROWS_AS(hardy_rayleigh_min(3, 0.5, 1e3, 512), ParameterError);
    CHECK_THROWS_AS(hardy_rayleigh_min(4, 1.2, 1e3, 512), ParameterError);
}

TEST_CASE("Hardy minimum decreases toward the sharp constant") {
    for (int n : {3, 4, 6}) {
        double prev = 1e300;
        for (double ratio : {1e2, 1e3, 1e4, 1e6}) {
            const double k = hardy_rayleigh_min(n, 0.0, ratio, 2048).kappa;
            CHECK(k <= prev);
            CHECK(k >= 0.25 * (n - 2) * (n - 2) - 1e-8);
            prev = k;
        }
    }
}

TEST_CASE("quotient minima agree with a dense generalized eigensolver") {
    std::vector<QuotientProblem> problems{hardy_problem(3, 0.0, 1e3, 150), hardy_problem(5, 0.7, 1e2, 200)};
    ManifoldModel m = cone(3);
    m.warp = {WarpFamily::decay, 0.2};
    const RadialGrid g = build_grid(m, 40.0, 180);
    problems.push_back(poincare_problem(m, g, 2.0, 0.25, 0.0));
    problems.push_back(poincare_problem(m, g, 0.0, 0.0, 0.1));
    for (const auto& q : problems) {
        Eigen::MatrixXd N, D;
        dense_forms(q, N, D);
        const double ref = oracle::generalized_eigenvalues(N, D)[0];
        CHECK(quotient_min(q) == doctest::Approx(ref).epsilon(1e-9));
        Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(q.size(), 0.3, 1.7);
        CHECK(q.numerator(u) == doctest::Approx(u.dot(N * u)).epsilon(1e-12));
        CHECK(q.denominator(u) == doctest::Approx(u.dot(D * u)).epsilon(1e-12));
    }
}

TEST_CASE("Poincare minimum") {
    const ManifoldModel m = cone(3);
    const RadialGrid g = build_grid(m, 64.0, 1024);
    const double k0 = poincare_min(m, g, 0.0);
    CHECK(k0 >= 0.25 - 1e-8);
    // angular modes only add the nonnegative lambda / w^2 term
    CHECK(quotient_min(poincare_problem(m, g, 2.0, 0.0, 0.0)) >= quotient_min(poincare_problem(m, g, 0.0, 0.0, 0.0)));
    CHECK(poincare_min(cone(3, sphere_spectrum(3, 2)), g, 0.0) == doctest::Approx(k0));
    // approaching the endpoint s -> (n-2)/2 drives the constant down
    double prev = k0;
    for (double s : {0.2, 0.4, 0.49}) {
        const double k = poincare_min(m, g, s);
        CHECK(k > 0.0);
        CHECK(k < prev);
        prev = k;
    }
    CHECK_THROWS_AS(poincare_min(m, g, 0.5), ParameterError);
    CHECK_THROWS_AS(poincare_lemma_min(m, g, 1.0, 0.5), ParameterError);
    CHECK(poincare_lemma_min(m, g, 1.25, 1.15) > 0.0);
}

namespace {

// nested grids with h = 0.1 on [1, R], R = 16, 32, 64
template <class F>
void check_domain_monotone(const ManifoldModel& m, F f) {
    std::vector<double> v;
    for (double R : {16.0, 32.0, 64.0}) v.push_back(f(build_grid(m, R, static_cast<int>(std::lround((R - 1.0) / 0.1)) + 1)));
    CHECK(v[2] > 0.0);
    CHECK(v[1] < v[0]);
    CHECK(v[2] < v[1]);
    // logarithmic truncation: the decrements shrink
    CHECK(v[1] - v[2] < v[0] - v[1]);
}

}  // namespace

TEST_CASE("Poincare constant decreases as the domain grows") {
    ManifoldModel m = cone(4, sphere_spectrum(4, 2));
    m.warp = {WarpFamily::decay, 0.2};
    check_domain_monotone(m, [&](const RadialGrid& g) { return poincare_min(m, g, 0.25); });
}

TEST_CASE("interpolation") {
    const ManifoldModel m = cone(3);
    const RadialGrid g = build_grid(m, 40.0, 400);
    const auto samples = random_bumps(g, 100, 17);
    CHECK(interpolation_check(m, g, 0.0, samples) == 1.0);
    // Hoelder plus the endpoint inequality give C <= kappa^{-theta/2}
    const double kappa = poincare_min(m, g, 0.0);
    for (double theta : {0.25, 0.5, 1.0})
        CHECK(interpolation_check(m, g, theta, samples) <= std::pow(kappa, -0.5 * theta) * (1 + 1e-10));
    CHECK_THROWS_AS(interpolation_check(m, g, 1.5, samples), DomainError);
    CHECK_THROWS_AS(interpolation_check(m, g, 0.5, {Eigen::VectorXd::Zero(g.interior())}), DomainError);
    // seeded samples are reproducible
    CHECK((random_bumps(g, 3, 17)[2] - samples[2]).norm() == 0.0);
}

TEST_CASE("b-Laplacian lower bound") {
    CHECK_THROWS_AS(vb_lower_bound(cone(4), build_grid(cone(4), 20.0, 200)), ParameterError);
    const ManifoldModel m = cone(5, sphere_spectrum(5, 1));
    check_domain_monotone(m, [&](const RadialGrid& g) { return vb_lower_bound(m, g); });
    // a single test vector gives an upper bound on the infimum
    const RadialGrid g = build_grid(m, 32.0, 311);
    const auto u = random_bumps(g, 1, 3)[0];
    const Tridiag P = assemble_P(m, g, 0.0);
    const Eigen::VectorXd pu = P.apply(u);
    const SparseMat rd = r_dr(g);
    const Eigen::VectorXd du = rd * u;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.interior(); ++i) {
        const double x2 = std::pow(m.x(g.r[i + 1]), 2);
        num += g.m[i + 1] * pu[i] * pu[i];
        den += g.m[i + 1] * x2 * x2 * (u[i] * u[i] + du[i] * du[i]);
    }
    CHECK(vb_lower_bound(m, g) <= num / den * (1 + 1e-10));
}
