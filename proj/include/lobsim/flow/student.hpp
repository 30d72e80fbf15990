#pragma once

// Centered Student t with real (possibly < 2) degrees of freedom.
// Scale convention: x = sigma * t_nu, density (1 + (x/sigma)^2/nu)^-((nu+1)/2)
// up to normalization.

namespace lobsim::flow::student {

/// log density at x for dof nu, scale sigma.
double log_pdf(double x, double nu, double sigma);

double pdf(double x, double nu, double sigma);

/// Upper tail P(X > z) of the standard (unit scale) t distribution.
double ccdf_standard(double z, double nu);

/// P(X > x) for scale sigma.
inline double ccdf(double x, double nu, double sigma) {
    return ccdf_standard(x / sigma, nu);
}

/// Quantile of the standard t (upper tail p): z with ccdf(z) = p. Bisection;
/// test support for sampler verification.
double upper_quantile_standard(double p, double nu);

} // namespace lobsim::flow::student
