#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "scatspec/discretize.hpp"
#include "scatspec/errors.hpp"
#include "scatspec/spectral.hpp"

using namespace scatspec;

namespace {

ManifoldModel cone(int n = 3) {
    ManifoldModel m;
    m.n = n;
    m.cutoff.identically_one = true;
    return m;
}

ManifoldModel perturbed() {
    ManifoldModel m;
    m.warp = {WarpFamily::decay, 0.2};
    m.potential = {0.5, 1.0};
    m.angular_spectrum = sphere_spectrum(3, 2);
    return m;
}

Eigen::VectorXd bump_on(const RadialGrid& g, double a, double b) {
    Eigen::VectorXd u(g.interior());
    for (int k = 0; k < g.interior(); ++k) {
        const double r = g.r[k + 1];
        const double t = (r - a) / (b - a);
        u[k] = (t > 0 && t < 1) ? std::pow(std::sin(M_PI * t), 4) : 0.0;
    }
    return u;
}

}  // namespace

TEST_CASE("grid nodes and weights") {
    const RadialGrid g = build_grid(cone(), 2.0, 3);
    REQUIRE(g.r.size() == 3);
    CHECK(g.r[0] == 1.0);
    CHECK(g.r[1] == 1.5);
    CHECK(g.r[2] == 2.0);
    CHECK(g.h == 0.5);
    CHECK(g.m[1] == doctest::Approx(1.5 * 1.5 * 0.5));
    CHECK(g.m[0] == doctest::Approx(0.5 * 1.0 * 0.5));
    CHECK(g.m[2] == doctest::Approx(0.5 * 4.0 * 0.5));

    const RadialGrid f = build_grid(perturbed(), 20.0, 200);
    for (std::size_t i = 1; i < f.r.size(); ++i) CHECK(f.r[i] > f.r[i - 1]);
    for (double m : f.m) CHECK(m > 0.0);
    CHECK_THROWS_AS(build_grid(ManifoldModel{}, 2.5, 100), ConfigError);
}

TEST_CASE("assembled P matches the stencil definition") {
    for (int n : {3, 5}) {
        for (double lambda : {0.0, 2.0}) {
            const RadialGrid g = build_grid(cone(n), 7.0, 60);
            const Eigen::MatrixXd ref = oracle::flat_P_dense(n, 1.0, 7.0, 60, lambda);
            const Eigen::MatrixXd got = assemble_P(cone(n), g, lambda).dense();
            CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
        }
    }
    CHECK_THROWS_AS(assemble_P(cone(), build_grid(cone(), 7.0, 60), -1.0), ParameterError);
}

TEST_CASE("flat cone eigenvalues converge at second order") {
    const double R = 11.0;
    auto errors = [&](int N) {
        const RadialGrid g = build_grid(cone(), R, N);
        const SymTridiag s = symmetrize(assemble_P(cone(), g, 0.0), g.interior_weights());
        const auto mu = eigvals_sym_tridiag(s);
        std::vector<double> e;
        for (int j = 1; j <= 10; ++j) {
            const double ex = oracle::dirichlet_eigenvalue(j, R - 1.0);
            e.push_back(std::abs(mu[j - 1] - ex) / ex);
        }
        return e;
    };
    const auto e1 = errors(1025), e2 = errors(2049);
    for (int j = 0; j < 10; ++j) {
        CHECK(e2[j] <= 1e-3);
        CHECK(e1[j] / e2[j] == doctest::Approx(4.0).epsilon(0.12));
    }
}

TEST_CASE("self-adjointness residuals vanish") {
    const ManifoldModel m = perturbed();
    const RadialGrid g = build_grid(m, 30.0, 500);
    const auto w = g.interior_weights();
    for (const auto& mode : m.angular_spectrum) {
        const SparseMat P = to_sparse(assemble_P(m, g, mode.lambda));
        const SparseMat G = assemble_G(m, g);
        CHECK(selfadjoint_residual(P, w) <= 1e-15);
        CHECK(antiselfadjoint_residual(conjugate_B(G, w), w) <= 1e-15);
        CHECK(selfadjoint_residual(commutator_K(P, G, w), w) <= 1e-15);
        CHECK(selfadjoint_residual(to_sparse(assemble_commutator(m, g, mode.lambda)), w) <= 1e-15);
    }
}

TEST_CASE("P is positive and nondecreasing in the angular eigenvalue") {
    const ManifoldModel m = perturbed();
    const RadialGrid g = build_grid(m, 30.0, 300);
    double prev = 0.0;
    for (double lambda : {0.0, 0.5, 2.0, 6.0, 12.0, 100.0}) {
        const auto mu = eigvals_sym_tridiag(symmetrize(assemble_P(m, g, lambda), g.interior_weights()));
        CHECK(mu.front() > 0.0);
        CHECK(mu.front() >= prev);
        double wmax = 0.0;
        for (double r : g.r) wmax = std::max(wmax, eval_warp(m, r).value);
        CHECK(mu.front() >= lambda / (wmax * wmax));
        prev = mu.front();
    }
}

TEST_CASE("generator G") {
    const ManifoldModel m = perturbed();
    const RadialGrid g = build_grid(m, 12.0, 221);
    const SparseMat G = assemble_G(m, g);
    for (int k = 0; k < g.interior(); ++k) {
        if (eval_cutoff_phi(m, g.r[k + 1]).value == 0.0) CHECK(G.row(k).norm() == 0.0);
    }
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.interior());
    const Eigen::VectorXd Gu = G * one;
    for (int k = 1; k + 1 < g.interior(); ++k) CHECK(Gu[k] == 0.0);
}

TEST_CASE("commutator with a scalar vanishes") {
    const RadialGrid g = build_grid(perturbed(), 12.0, 120);
    const auto w = g.interior_weights();
    const SparseMat G = assemble_G(perturbed(), g);
    const SparseMat I = 3.0 * multiplier(std::vector<double>(w.size(), 1.0));
    CHECK(commutator_K(I, G, w).norm() == 0.0);
    CHECK_THROWS_AS(commutator_K(I, assemble_G(perturbed(), build_grid(perturbed(), 12.0, 60)), w), DomainError);
}

TEST_CASE("exact cone commutator equals P") {
    for (int n : {3, 4, 6}) {
        const ManifoldModel m = cone(n);
        const RadialGrid g = build_grid(m, 20.0, 400);
        for (double lambda : {0.0, 3.0}) {
            const Eigen::MatrixXd K = assemble_commutator(m, g, lambda).dense();
            const Eigen::MatrixXd P = assemble_P(m, g, lambda).dense();
            CHECK((K - P).cwiseAbs().maxCoeff() <= 1e-10 * P.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("literal commutator approaches P at second order away from the ends") {
    const ManifoldModel m = cone();
    auto defect = [&](int N) {
        const RadialGrid g = build_grid(m, 21.0, N);
        const auto w = g.interior_weights();
        const SparseMat P = to_sparse(assemble_P(m, g, 0.0));
        const SparseMat K = commutator_K(P, assemble_G(m, g), w);
        const Eigen::VectorXd u = bump_on(g, 6.0, 16.0);
        const Eigen::VectorXd d = (K - P) * u;
        const Eigen::VectorXd pu = P * u;
        return weighted_norm(d, w) / weighted_norm(pu, w);
    };
    const double d1 = defect(401), d2 = defect(801);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.12));
}

TEST_CASE("symmetrize") {
    Tridiag t{{-1.0, -2.0}, {4.0, 5.0, 6.0}, {-1.0, -2.0}};
    const SymTridiag s = symmetrize(t, {1.0, 1.0, 1.0});
    CHECK(s.d == t.diag);
    CHECK(s.e == t.upper);

    const ManifoldModel m = perturbed();
    const RadialGrid g = build_grid(m, 10.0, 50);
    const auto w = g.interior_weights();
    const Tridiag P = assemble_P(m, g, 2.0);
    const auto mu = eigvals_sym_tridiag(symmetrize(P, w));
    // dense weighted generalized problem D P u = mu D u as the reference
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) D(i, i) = w[i];
    Eigen::MatrixXd DP = D * P.dense();
    DP = 0.5 * (DP + DP.transpose()).eval();
    const Eigen::VectorXd ref = oracle::generalized_eigenvalues(DP, D);
    for (std::size_t j = 0; j < mu.size(); ++j) CHECK(mu[j] == doctest::Approx(ref[j]).epsilon(1e-10));

    Tridiag bad = P;
    bad.upper[3] *= 1.01;
    CHECK_THROWS_AS(symmetrize(bad, w), DomainError);
}
