#pragma once

// Closed-form spectra of 3x3 matrices through the monic characteristic cubic
// L(lambda) = lambda^3 + a lambda^2 + b lambda + c and its depressed form
// t^3 + p t + q = 0 (lambda = t - a/3).
//
// Printed versions of these formulas in the literature carry several slips;
// the ones used here are checked against a companion-matrix oracle:
//   p = b - a^2/3          (not b - a/3)
//   every root shifts by -a/3 (not -q/3)
//   the trigonometric branch is Delta < 0

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace fracdyn {

template <typename Scalar>
struct CubicCoefficients {
  Scalar a{}, b{}, c{};

  Scalar scale() const {
    using std::abs;
    return std::max({Scalar(1), abs(a), abs(b), abs(c)});
  }

  std::complex<Scalar> operator()(std::complex<Scalar> z) const {
    return ((z + a) * z + b) * z + c;
  }
};

enum class CubicBranch { OneRealPair, Repeated, ThreeReal };

inline const char* to_string(CubicBranch branch) {
  switch (branch) {
    case CubicBranch::OneRealPair: return "one-real-pair";
    case CubicBranch::Repeated: return "repeated";
    case CubicBranch::ThreeReal: return "three-real";
  }
  return "?";
}

template <typename Scalar>
struct CubicAnalysis {
  Scalar p{}, q{}, delta{};
  CubicBranch branch{CubicBranch::Repeated};
};

/// Three eigenvalues sorted by (real, imaginary).
template <typename Scalar>
struct Spectrum {
  std::array<std::complex<Scalar>, 3> values{};

  const std::complex<Scalar>& operator[](std::size_t i) const { return values[i]; }
  auto begin() const { return values.begin(); }
  auto end() const { return values.end(); }

  Scalar max_real() const {
    return std::max({values[0].real(), values[1].real(), values[2].real()});
  }
};

namespace detail {

template <typename Scalar>
bool spectral_less(const std::complex<Scalar>& l, const std::complex<Scalar>& r) {
  if (l.real() != r.real()) return l.real() < r.real();
  return l.imag() < r.imag();
}

template <typename Scalar>
Spectrum<Scalar> sorted_spectrum(std::array<std::complex<Scalar>, 3> v) {
  std::sort(v.begin(), v.end(), spectral_less<Scalar>);
  return {v};
}

/// Newton refinement of a real root; kept only while the residual shrinks.
template <typename Scalar>
Scalar polish_real_root(const CubicCoefficients<Scalar>& k, Scalar x) {
  using std::abs;
  auto value = [&](Scalar v) { return ((v + k.a) * v + k.b) * v + k.c; };
  Scalar fx = value(x);
  for (int i = 0; i < 3 && fx != Scalar(0); ++i) {
    const Scalar slope = (Scalar(3) * x + Scalar(2) * k.a) * x + k.b;
    if (slope == Scalar(0)) break;
    const Scalar next = x - fx / slope;
    const Scalar f_next = value(next);
    if (!(abs(f_next) < abs(fx))) break;
    x = next;
    fx = f_next;
  }
  return x;
}

}  // namespace detail

/// a = -trace, b = sum of principal 2x2 minors, c = -det.
template <typename Derived>
CubicCoefficients<typename Derived::Scalar> characteristic_cubic(
    const Eigen::MatrixBase<Derived>& j) {
  static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 3,
                "characteristic_cubic expects a 3x3 matrix");
  using Scalar = typename Derived::Scalar;
  const Scalar minors = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0) +
                        j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0) +
                        j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1);
  return {-j.trace(), minors, -j.determinant()};
}

template <typename Scalar>
CubicAnalysis<Scalar> cubic_analysis(const CubicCoefficients<Scalar>& k) {
  using std::abs;
  CubicAnalysis<Scalar> out;
  out.p = k.b - k.a * k.a / Scalar(3);
  out.q = Scalar(2) * k.a * k.a * k.a / Scalar(27) - k.a * k.b / Scalar(3) + k.c;
  out.delta = out.q * out.q / Scalar(4) + out.p * out.p * out.p / Scalar(27);
  const Scalar tol =
      Scalar(1e-12) * std::max({Scalar(1), out.q * out.q, abs(out.p * out.p * out.p)});
  if (abs(out.delta) <= tol)
    out.branch = CubicBranch::Repeated;
  else
    out.branch = out.delta > Scalar(0) ? CubicBranch::OneRealPair : CubicBranch::ThreeReal;
  return out;
}

template <typename Scalar>
Spectrum<Scalar> cubic_roots(const CubicCoefficients<Scalar>& k) {
  using std::abs;
  using std::sqrt;
  using C = std::complex<Scalar>;
  const CubicAnalysis<Scalar> an = cubic_analysis(k);
  const Scalar shift = -k.a / Scalar(3);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;

  switch (an.branch) {
    case CubicBranch::OneRealPair: {
      // Cardano: t = cbrt(-q/2 + sqrt(D)) + cbrt(-q/2 - sqrt(D)). The larger
      // magnitude term is taken directly, the other from u*v = -p/3.
      const Scalar s = sqrt(an.delta);
      const Scalar big = an.q >= Scalar(0) ? std::cbrt(-an.q / Scalar(2) - s)
                                           : std::cbrt(-an.q / Scalar(2) + s);
      const Scalar small = big != Scalar(0) ? -an.p / (Scalar(3) * big) : Scalar(0);
      const Scalar r = detail::polish_real_root(k, big + small + shift);

      // Deflate: L = (lambda - r)(lambda^2 + B lambda + P).
      const Scalar sum_b = k.a + r;
      const Scalar product = abs(r) > Scalar(1) ? -k.c / r : k.b + r * sum_b;
      const Scalar disc = sum_b * sum_b - Scalar(4) * product;
      const Scalar re = -sum_b / Scalar(2);
      if (disc < Scalar(0)) {
        const Scalar im = sqrt(-disc) / Scalar(2);
        return detail::sorted_spectrum<Scalar>({C(r), C(re, -im), C(re, im)});
      }
      const Scalar half = sqrt(disc) / Scalar(2);
      return detail::sorted_spectrum<Scalar>(
          {C(r), C(detail::polish_real_root(k, re - half)),
           C(detail::polish_real_root(k, re + half))});
    }
    case CubicBranch::Repeated: {
      // lambda1 = 2 cbrt(-q/2) - a/3, lambda2 = lambda3 = -cbrt(-q/2) - a/3.
      const Scalar m = std::cbrt(-an.q / Scalar(2));
      const Scalar single = detail::polish_real_root(k, Scalar(2) * m + shift);
      const Scalar twin = -m + shift;
      return detail::sorted_spectrum<Scalar>({C(single), C(twin), C(twin)});
    }
    case CubicBranch::ThreeReal: {
      // t = 2 sqrt(-p/3) sin(theta), sin(3 theta) = 3 sqrt(3) q / (2 (-p)^{3/2}).
      const Scalar root_mp = sqrt(-an.p);
      const Scalar amp = Scalar(2) * root_mp / sqrt(Scalar(3));
      Scalar arg = Scalar(3) * sqrt(Scalar(3)) * an.q / (Scalar(2) * root_mp * root_mp * root_mp);
      arg = std::clamp(arg, Scalar(-1), Scalar(1));
      const Scalar phi = std::asin(arg) / Scalar(3);
      const Scalar l1 = amp * std::sin(phi) + shift;
      const Scalar l2 = -amp * std::sin(phi + pi / Scalar(3)) + shift;
      const Scalar l3 = amp * std::cos(phi + pi / Scalar(6)) + shift;
      return detail::sorted_spectrum<Scalar>({C(detail::polish_real_root(k, l1)),
                                              C(detail::polish_real_root(k, l2)),
                                              C(detail::polish_real_root(k, l3))});
    }
  }
  return {};
}

template <typename Derived>
Spectrum<typename Derived::Scalar> eigenvalues(const Eigen::MatrixBase<Derived>& j) {
  return cubic_roots(characteristic_cubic(j));
}

/// All roots in the open left half-plane iff a > 0, c > 0 and a*b > c.
template <typename Scalar>
bool routh_hurwitz_cubic(const CubicCoefficients<Scalar>& k) {
  return k.a > Scalar(0) && k.c > Scalar(0) && k.a * k.b > k.c;
}

}  // namespace fracdyn
