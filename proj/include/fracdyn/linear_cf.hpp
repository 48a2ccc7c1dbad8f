#pragma once

#include "fracdyn/order.hpp"

#include <complex>
#include <stdexcept>

namespace fracdyn {

/// Exact solution of the scalar linear CF problem  D^alpha x = lambda x,
/// x(0) = x0, with M(alpha) = 1:
///
///   x(t) = x0 * exp(alpha * lambda * t / (1 - (1 - alpha) * lambda)).
///
/// The CF integral equation x = x0 + (1-alpha)(g(x) - g(x0)) + alpha * int g
/// differentiates to (1 - (1-alpha) lambda) x' = alpha lambda x.
template <typename Scalar>
std::complex<Scalar> linear_cf_exact(std::complex<Scalar> lambda, FractionalOrder<Scalar> order,
                                     std::complex<Scalar> x0, Scalar t) {
  const Scalar alpha = order.value();
  const std::complex<Scalar> denom = Scalar(1) - (Scalar(1) - alpha) * lambda;
  if (denom == std::complex<Scalar>(0))
    throw std::domain_error("(1 - alpha) * lambda = 1: the CF linear problem is singular");
  return x0 * std::exp(alpha * lambda * t / denom);
}

}  // namespace fracdyn
