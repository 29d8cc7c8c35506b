#pragma once

// Convolution of generalized functionals (pointwise product of Fock
// transforms) and approximation by the indicator family Psi_n.

#include <optional>
#include <vector>

#include "fockseq/functional.hpp"
#include "fockseq/sequence.hpp"

namespace fockseq {

/// F(sigma) = F_a(sigma) F_b(sigma). Table-backed whenever either factor has
/// finite support (the product vanishes off it); rule-backed otherwise.
FockCoefficients convolve(const FockCoefficients& a, const FockCoefficients& b);

/// The rule-backed all-ones transform, unit of convolution and limit of Psi_n.
FockCoefficients ones();

/// Psi_n: coefficient 1 on Gamma_{n]}, support bound n.
FockCoefficients psi0(unsigned n);

/// Psi_0, ..., Psi_last.
FunctionalSequence psi0_sequence(unsigned last);

/// Psi_n * phi: phi on Gamma_{n]}, zero elsewhere.
FockCoefficients approximate(const FockCoefficients& phi, unsigned n);

/// approximate(phi, 0), ..., approximate(phi, last).
FunctionalSequence approximation_sequence(const FockCoefficients& phi, unsigned last);

/// [sum_{sigma in domain, sigma not in Gamma_{n]}} lambda^{-2q} |F(sigma)|^2]^{1/2},
/// the -q norm of phi - approximate(phi, n) on the domain. Requires q > 1/2, and
/// q > order + 1/2 when phi's certificate is supplied (InsufficientOrder).
double approximation_residual(const FockCoefficients& phi, unsigned n, double q, const TruncatedDomain& domain,
                              const std::optional<GrowthCertificate>& cert = std::nullopt);

/// Residuals for n = 0..domain.max_index().
std::vector<double> residual_curve(const FockCoefficients& phi, double q, const TruncatedDomain& domain,
                                   const std::optional<GrowthCertificate>& cert = std::nullopt);

}  // namespace fockseq
