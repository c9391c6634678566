#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "smirnov/types.hpp"

namespace smirnov {

/// Polynomial in the shifted basis (z - center)^k. The stored degree is the
/// formal degree: a tiny leading coefficient is kept until `trimmed` is
/// called explicitly.
template <typename Real>
class Polynomial {
 public:
  using Scalar = std::complex<Real>;
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coeffs::Ones(1)) {}
  Polynomial(Scalar center, Coeffs coeffs) : center_(center), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = Coeffs::Zero(1);
  }

  static Polynomial constant(Scalar center, Scalar value) { return {center, Coeffs::Constant(1, value)}; }

  Scalar center() const noexcept { return center_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  Index degree() const noexcept { return coeffs_.size() - 1; }
  Scalar leading() const { return coeffs_[degree()]; }
  Scalar operator[](Index k) const { return coeffs_[k]; }

  Scalar operator()(Scalar z) const {
    const Scalar w = z - center_;
    Scalar acc = coeffs_[degree()];
    for (Index k = degree() - 1; k >= 0; --k) acc = acc * w + coeffs_[k];
    return acc;
  }

 private:
  Scalar center_{0};
  Coeffs coeffs_;
};

using Poly = Polynomial<double>;

template <typename Real>
std::complex<Real> eval(const Polynomial<Real>& poly, std::complex<Real> z) {
  return poly(z);
}

template <typename Real>
typename Polynomial<Real>::Coeffs eval(const Polynomial<Real>& poly,
                                       const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& z) {
  return z.unaryExpr([&](std::complex<Real> x) { return poly(x); });
}

/// Coefficient convolution of two polynomials with the same center.
template <typename Real>
Polynomial<Real> multiply(const Polynomial<Real>& a, const Polynomial<Real>& b) {
  if (a.center() != b.center()) throw ConfigError("multiply: expansion centers differ");
  typename Polynomial<Real>::Coeffs c = Polynomial<Real>::Coeffs::Zero(a.degree() + b.degree() + 1);
  for (Index i = 0; i <= a.degree(); ++i)
    c.segment(i, b.degree() + 1) += a[i] * b.coeffs();
  return {a.center(), std::move(c)};
}

inline constexpr Index kDefaultDegreeCap = 4096;

/// poly^p by repeated squaring; degree n p.
template <typename Real>
Polynomial<Real> power(const Polynomial<Real>& poly, int p, Index degree_cap = kDefaultDegreeCap) {
  if (p < 1) throw ConfigError("power: exponent must be a positive integer");
  if (poly.degree() * p > degree_cap)
    throw ConfigError("power: degree " + std::to_string(poly.degree() * p) + " exceeds cap " +
                      std::to_string(degree_cap));
  Polynomial<Real> result = Polynomial<Real>::constant(poly.center(), 1);
  Polynomial<Real> base = poly;
  for (int e = p;;) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e == 0) break;
    base = multiply(base, base);
  }
  return result;
}

/// The antiderivative vanishing at the expansion center.
template <typename Real>
Polynomial<Real> antiderivative_from(const Polynomial<Real>& poly) {
  typename Polynomial<Real>::Coeffs c(poly.degree() + 2);
  c[0] = 0;
  for (Index k = 0; k <= poly.degree(); ++k) c[k + 1] = poly[k] / static_cast<Real>(k + 1);
  return {poly.center(), std::move(c)};
}

template <typename Real>
Polynomial<Real> derivative(const Polynomial<Real>& poly) {
  if (poly.degree() == 0) return Polynomial<Real>::constant(poly.center(), 0);
  typename Polynomial<Real>::Coeffs c(poly.degree());
  for (Index k = 1; k <= poly.degree(); ++k) c[k - 1] = poly[k] * static_cast<Real>(k);
  return {poly.center(), std::move(c)};
}

/// Drops trailing coefficients below `relative` * max |c_k|.
template <typename Real>
Polynomial<Real> trimmed(const Polynomial<Real>& poly, Real relative) {
  const Real scale = poly.coeffs().cwiseAbs().maxCoeff();
  Index n = poly.degree();
  while (n > 0 && std::abs(poly[n]) <= relative * scale) --n;
  return {poly.center(), poly.coeffs().head(n + 1)};
}

/// Monic polynomial with the given zeros, expanded about `center`.
template <typename Real>
Polynomial<Real> from_roots(std::complex<Real> center, std::span<const std::complex<Real>> zeros) {
  typename Polynomial<Real>::Coeffs c = Polynomial<Real>::Coeffs::Zero(static_cast<Index>(zeros.size()) + 1);
  c[0] = 1;
  Index deg = 0;
  for (const auto& r : zeros) {
    const std::complex<Real> w = r - center;
    for (Index k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - w * c[k];
    c[0] = -w * c[0];
    ++deg;
  }
  return {center, std::move(c)};
}

template <typename Real>
struct ZeroSet {
  std::vector<std::complex<Real>> roots;
  std::vector<Real> residuals;  // |P(root)|
  std::vector<bool> converged;
  int sweeps = 0;

  bool all_converged() const { return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; }); }
};

inline constexpr double kRootTrimThreshold = 1e-14;
inline constexpr int kMaxAberthSweeps = 500;

/// Aberth–Ehrlich simultaneous iteration on the trimmed polynomial, started
/// from a circle whose radius is the Cauchy bound. Stops when the largest
/// correction, relative to max(1, |root - center|), falls below `tol` or
/// after 500 sweeps; roots whose last correction exceeded it are flagged as
/// not converged.
template <typename Real>
ZeroSet<Real> roots(const Polynomial<Real>& poly, Real tol) {
  using C = std::complex<Real>;
  const Polynomial<Real> p = trimmed(poly, static_cast<Real>(kRootTrimThreshold));
  const Index n = p.degree();
  if (n < 1) throw ConfigError("roots: polynomial has degree 0 after trimming");

  const typename Polynomial<Real>::Coeffs a = p.coeffs() / p.leading();  // monic in w = z - center
  Real bound = 0;
  for (Index k = 0; k < n; ++k) bound = std::max(bound, std::abs(a[k]));
  bound += 1;

  // Newton ratio p(w)/p'(w); evaluated through the reversed polynomial when
  // |w| > 1 to keep Horner in range.
  auto newton_ratio = [&](C w) -> C {
    if (std::abs(w) <= 1) {
      C v = a[n];
      C d = 0;
      for (Index k = n - 1; k >= 0; --k) {
        d = d * w + v;
        v = v * w + a[k];
      }
      return v / d;
    }
    const C y = C(1) / w;
    C v = a[0];
    C d = 0;
    for (Index k = 1; k <= n; ++k) {
      d = d * y + v;
      v = v * y + a[k];
    }
    // p(w) = w^n rev(y), p'(w) = w^{n-1} (n rev(y) - y rev'(y))
    return w * v / (static_cast<Real>(n) * v - y * d);
  };

  std::vector<C> w(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k)
    w[static_cast<std::size_t>(k)] = std::polar(bound, static_cast<Real>(2 * kPi * k) / static_cast<Real>(n) + Real(0.4));

  std::vector<Real> last(static_cast<std::size_t>(n), std::numeric_limits<Real>::infinity());
  ZeroSet<Real> out;
  for (int sweep = 1; sweep <= kMaxAberthSweeps; ++sweep) {
    Real largest = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const C ratio = newton_ratio(w[k]);
      C repulsion = 0;
      for (std::size_t j = 0; j < w.size(); ++j)
        if (j != k) repulsion += C(1) / (w[k] - w[j]);
      C step = ratio / (C(1) - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = 0;
      w[k] -= step;
      last[k] = std::abs(step) / std::max(Real(1), std::abs(w[k]));
      largest = std::max(largest, last[k]);
    }
    out.sweeps = sweep;
    if (largest < tol) break;
  }

  for (std::size_t k = 0; k < w.size(); ++k) {
    const C z = w[k] + p.center();
    out.roots.push_back(z);
    out.residuals.push_back(std::abs(poly(z)));
    out.converged.push_back(last[k] < tol);
  }
  return out;
}

/// m_k = (1/N) sum_j ((z_j - center)/scale)^k for k = 1..k_max.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> moments(std::span<const std::complex<Real>> points, int k_max,
                                                             std::complex<Real> center, Real scale) {
  if (points.empty()) throw ConfigError("moments: empty point set");
  if (!(scale > 0)) throw ConfigError("moments: scale must be positive");
  if (k_max < 1) throw ConfigError("moments: k_max must be >= 1");
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> m = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>::Zero(k_max);
  for (const auto& z : points) {
    const std::complex<Real> u = (z - center) / scale;
    std::complex<Real> uk = 1;
    for (int k = 0; k < k_max; ++k) {
      uk *= u;
      m[k] += uk;
    }
  }
  return m / static_cast<Real>(points.size());
}

}  // namespace smirnov
