#pragma once

#include <stdexcept>
#include <string>

namespace fracdyn {

/// Fractional order alpha in (0, 1].
template <typename Scalar>
class FractionalOrder {
 public:
  explicit FractionalOrder(Scalar alpha) : alpha_(alpha) {
    if (!(alpha > Scalar(0) && alpha <= Scalar(1)))
      throw std::invalid_argument("fractional order must lie in (0, 1], got " +
                                  std::to_string(static_cast<double>(alpha)));
  }
  Scalar value() const { return alpha_; }
  bool is_classical() const { return alpha_ == Scalar(1); }

 private:
  Scalar alpha_;
};

}  // namespace fracdyn
