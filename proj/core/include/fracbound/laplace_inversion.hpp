#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fracbound {

/// Fixed-Talbot inversion (Abate-Valko) with M contour nodes:
///   f(t) ~ r/M [ F(r) e^{rt}/2 + sum_{k=1}^{M-1} Re(e^{t S_k} F(S_k) (1 + i sigma_k)) ],
/// r = 2M/(5t), S(theta) = r theta (cot theta + i),
/// sigma(theta) = theta + (theta cot theta - 1) cot theta.
/// F must be analytic off the negative real axis.
double invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& transform, double t,
                     int nodes = 32);

/// Gaver-Stehfest weights V_1..V_N for even N.
std::vector<long double> stehfest_weights(int order);

/// Gaver-Stehfest inversion: f(t) ~ ln2/t sum_k V_k F(k ln2 / t), summed in
/// long double. Weights grow like 10^{N/2}, so a transform evaluated in double
/// is only usable up to N ~ 14; an extended-precision transform reaches N ~ 18.
double invert_gaver_stehfest(const std::function<long double(long double)>& transform, double t,
                             int order = 18);

}  // namespace fracbound
