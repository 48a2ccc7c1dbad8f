#pragma once

// Product-integration weights shared by the fractional predictor-corrector
// schemes. With exponent n the corrector weights are
//
//   b_{i,k+1} = h^n / (n(n+1)) * { k^{n+1} - (k+1)^n (k-n)                      i = 0
//                                 { (k-i+2)^{n+1} - 2(k-i+1)^{n+1} + (k-i)^{n+1}  1 <= i <= k
//                                 { 1                                             i = k+1
//
// and the predictor weights are d_{i,k+1} = h^n / n * [(k-i+1)^n - (k-i)^n].
// The CF scheme uses n = 1 (trapezoid / rectangle rules); the Caputo scheme
// uses n = alpha and an extra 1/Gamma(alpha) prefactor.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracdyn {

namespace detail {

template <typename Scalar>
void check_weight_args(Scalar exponent, Scalar step) {
  if (!(step > Scalar(0)) || !std::isfinite(step))
    throw std::invalid_argument("quadrature step must be positive and finite");
  if (!(exponent > Scalar(0)) || !std::isfinite(exponent))
    throw std::invalid_argument("weight exponent must be positive and finite");
}

}  // namespace detail

template <typename Scalar>
using WeightVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Corrector weights b_{0..k+1, k+1}; length k + 2.
template <typename Scalar>
WeightVector<Scalar> corrector_weights(std::size_t k, Scalar exponent, Scalar step) {
  detail::check_weight_args(exponent, step);
  using std::pow;
  const Scalar n = exponent;
  const Scalar kk = static_cast<Scalar>(k);
  const Scalar scale = pow(step, n) / (n * (n + Scalar(1)));

  WeightVector<Scalar> w(static_cast<Eigen::Index>(k + 2));
  w(0) = pow(kk, n + Scalar(1)) - pow(kk + Scalar(1), n) * (kk - n);
  for (std::size_t i = 1; i <= k; ++i) {
    const Scalar m = static_cast<Scalar>(k - i);
    w(static_cast<Eigen::Index>(i)) = pow(m + Scalar(2), n + Scalar(1)) -
                                      Scalar(2) * pow(m + Scalar(1), n + Scalar(1)) +
                                      pow(m, n + Scalar(1));
  }
  w(static_cast<Eigen::Index>(k + 1)) = Scalar(1);
  return scale * w;
}

/// Predictor weights d_{0..k, k+1}; length k + 1.
template <typename Scalar>
WeightVector<Scalar> predictor_weights(std::size_t k, Scalar exponent, Scalar step) {
  detail::check_weight_args(exponent, step);
  using std::pow;
  const Scalar n = exponent;
  const Scalar scale = pow(step, n) / n;

  WeightVector<Scalar> w(static_cast<Eigen::Index>(k + 1));
  for (std::size_t i = 0; i <= k; ++i) {
    const Scalar m = static_cast<Scalar>(k - i);
    w(static_cast<Eigen::Index>(i)) = pow(m + Scalar(1), n) - pow(m, n);
  }
  return scale * w;
}

/// Cached form of the weights above for a whole integration run. The
/// integrators ask for O(N^2) weights, so powers m^n and m^{n+1} are
/// tabulated once for m = 0..N+1.
template <typename Scalar>
class WeightTable {
 public:
  WeightTable(Scalar exponent, Scalar step, std::size_t max_steps)
      : exponent_(exponent) {
    detail::check_weight_args(exponent, step);
    using std::pow;
    corrector_scale_ = pow(step, exponent) / (exponent * (exponent + Scalar(1)));
    predictor_scale_ = pow(step, exponent) / exponent;
    pow_n_.resize(max_steps + 2);
    pow_n1_.resize(max_steps + 2);
    for (std::size_t m = 0; m < pow_n_.size(); ++m) {
      const Scalar mm = static_cast<Scalar>(m);
      pow_n_[m] = pow(mm, exponent);
      pow_n1_[m] = pow(mm, exponent + Scalar(1));
    }
  }

  std::size_t max_steps() const { return pow_n_.size() - 2; }

  /// Fills the first k + 2 entries of `out` with b_{i,k+1}.
  void corrector(std::size_t k, WeightVector<Scalar>& out) const {
    out.resize(static_cast<Eigen::Index>(k + 2));
    const Scalar kk = static_cast<Scalar>(k);
    out(0) = pow_n1_[k] - pow_n_[k + 1] * (kk - exponent_);
    for (std::size_t i = 1; i <= k; ++i) {
      const std::size_t m = k - i;
      out(static_cast<Eigen::Index>(i)) =
          pow_n1_[m + 2] - Scalar(2) * pow_n1_[m + 1] + pow_n1_[m];
    }
    out(static_cast<Eigen::Index>(k + 1)) = Scalar(1);
    out *= corrector_scale_;
  }

  /// Fills the first k + 1 entries of `out` with d_{i,k+1}.
  void predictor(std::size_t k, WeightVector<Scalar>& out) const {
    out.resize(static_cast<Eigen::Index>(k + 1));
    for (std::size_t i = 0; i <= k; ++i) {
      const std::size_t m = k - i;
      out(static_cast<Eigen::Index>(i)) = pow_n_[m + 1] - pow_n_[m];
    }
    out *= predictor_scale_;
  }

 private:
  Scalar exponent_;
  Scalar corrector_scale_{};
  Scalar predictor_scale_{};
  std::vector<Scalar> pow_n_;
  std::vector<Scalar> pow_n1_;
};

}  // namespace fracdyn
