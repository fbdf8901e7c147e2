#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scatspec/geometry.hpp"
#include "scatspec/mourre.hpp"
#include "scatspec/quadrature.hpp"
#include "scatspec/wave.hpp"

namespace scatspec {

/// Suites in report order.
const std::vector<std::string>& known_suites();

struct Tolerances {
    double fit = 0.15;          ///< log-log slope tolerance
    double r2 = 0.9;            ///< below this a fit is inconclusive
    double hardy_band = 0.05;   ///< kappa within [sharp, sharp (1 + band)]
    double mourre_c = 0.25;
    double mourre_slope = 0.3;  ///< relative band for the deviation exponent around -rho
    double sqrt_c = 0.1;
    double quad = 1e-6;
    double identity = 1e-8;
    double adjoint_gap = 1e-8;
    double ratio = 2.0;
    double energy = 1e-8;
    double plateau = 1.1;
    double symmetry = 1e-12;
};

struct ExperimentConfig {
    ManifoldModel model;
    WindowGridRule grid;
    SpectralWindow window{0.5, 2.0, 1.0};
    QuadSpec quad;

    std::vector<double> mourre_H{4, 8, 16, 32};

    std::vector<double> hardy_s{0.0};
    std::vector<double> hardy_ratios{1e2, 1e3, 1e4};
    int hardy_N = 4096;

    double poincare_s = 0.25;
    double poincare_r_max = 64.0;
    int poincare_N = 1024;
    double poincare_theta = 0.5;
    int poincare_samples = 16;

    WeightFunction weight;
    int weight_points = 1000;
    int weight_eps_steps = 4;
    double weight_h = 0.1;

    std::vector<double> resolvent_s{0.0, 0.4};
    std::vector<int> resolvent_order{0, 1};
    std::complex<double> resolvent_w{0.0, 1.0};
    std::vector<double> resolvent_H{4, 8, 16, 32};
    double resolvent_r_factor = 20.0;
    double resolvent_h = 0.1;
    bool resolvent_negative_branch = true;

    std::vector<double> gain_sigma{0.0, 0.5};
    std::vector<int> gain_order{0, 1, 2};
    std::vector<double> gain_H{4, 8, 16, 32};

    std::vector<double> adjoint_mu{0.5, 1.0};
    std::vector<double> adjoint_H{8, 16, 32, 64};

    std::vector<double> wave_mu{1.0, 0.25, 0.5};
    double wave_eps = 0.0;
    std::vector<double> wave_T{8, 16, 32, 48};
    double wave_r_max = 64.0;
    double wave_h = 0.05;
    double wave_dt = 0.1;
    double wave_margin = 8.0;
    BumpSpec wave_data;
    bool wave_trapping_control = true;

    std::string output_dir = "out";
    Tolerances tol;

    /// Resolved key=value pairs (defaults filled, overrides applied), sorted by key.
    std::map<std::string, std::string> resolved;
    std::uint64_t hash = 0;
};

/// Parses "key = value" lines ('#' starts a comment). Unknown keys, malformed values and
/// violated hypotheses are all collected into one ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// FNV-1a over the resolved pairs; seeds every sampled quantity.
std::uint64_t config_hash(const std::map<std::string, std::string>& resolved);

}  // namespace scatspec
