#pragma once

#include <span>

namespace scatspec {

/// Least-squares line through (log x, log y).
struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;

    /// Fits with R^2 below 0.9 are reported as inconclusive.
    bool conclusive() const { return points >= 2 && r2 >= 0.9; }
};

/// Throws DomainError for fewer than two points or nonpositive data.
LogFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace scatspec
