#pragma once

namespace fracbound {

/// One-parameter Mittag-Leffler function E_beta(z) = sum_k z^k / Gamma(beta k + 1)
/// for beta in (0, 1] and real z <= 0.
///
/// Small |z|: the power series in long double, accepted only while the
/// largest term stays below 1e3 (bounded cancellation). Large |z|: the
/// algebraic asymptotic expansion. In between: the real-axis integral
///
///   E_beta(-x) = sin(beta pi)/(pi beta) int_0^1 [e^{-c v^{1/beta}} + e^{-c v^{-1/beta}}]
///                                              / (1 + 2 v cos(beta pi) + v^2) dv,
///   c = x^{1/beta},
///
/// obtained from the completely monotone representation by r = v^{1/beta}
/// on (0,1) and r = v^{-1/beta} on (1,inf); the integrand is bounded and smooth.
double mittag_leffler(double beta, double z);

enum class MittagLefflerMethod { Series, Integral, Asymptotic };

/// Method `mittag_leffler` selects for these arguments.
MittagLefflerMethod mittag_leffler_method(double beta, double z);

/// Forces a method; Series and Asymptotic throw DomainError when their
/// acceptance test fails.
double mittag_leffler(double beta, double z, MittagLefflerMethod method);

}  // namespace fracbound
