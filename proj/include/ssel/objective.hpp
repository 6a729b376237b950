#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ssel/core.hpp"

namespace ssel {

/// Least-squares AR(1) fit z_t ~ a z_{t-1} + b.
struct AR1Fit {
    double a = 0.0;
    double b = 0.0;
    double mse = 0.0;
    std::size_t n_pairs = 0;
};

/// Raised when a sequence has fewer than three samples.
class SequenceTooShort : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed-form OLS over the pairs (z_{t-1}, z_t). A constant lagged
/// regressor gives a = 0, b = mean of targets. Requires z.size() >= 3.
AR1Fit fit_ar1(std::span<const double> z);

struct GaussianFit {
    double mean = 0.0;
    double var = 0.0;
};

/// Sample mean and population variance, with the variance floored at floor_var.
GaussianFit fit_gaussian(std::span<const double> z, double floor_var);

/// Symmetric KL divergence between N(mu1, var1) and N(mu2, var2).
double sym_kl_gaussian(double mu1, double var1, double mu2, double var2);

struct ObjectiveBreakdown {
    double ar_term = 0.0;
    double bdry_term = 0.0;
    double align_term = 0.0;
    double sparsity_term = 0.0;
    double total = 0.0;

    bool operator==(const ObjectiveBreakdown&) const = default;
};

double ar_term(const Candidate& c, const Dataset& dataset);
double bdry_term(const Candidate& c, const Dataset& dataset, const Config& cfg);
double align_term(const Candidate& c, const Dataset& dataset);
double sparsity_term(const Candidate& c);

/// ar - lambda_bdry * bdry + lambda_align * align + lambda_1 * sparsity.
/// Lower is better. Each stage is projected once and shared between the
/// AR and boundary terms.
ObjectiveBreakdown total_objective(const Candidate& c, const Dataset& dataset, const Config& cfg);

}  // namespace ssel
