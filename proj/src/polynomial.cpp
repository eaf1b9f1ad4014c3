#include "rglab/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "rglab/error.hpp"

namespace rglab {

namespace {

double cauchy_bound(std::span<const double> c) {
  const double lead = std::abs(c.back());
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k)
    m = std::max(m, std::abs(c[k]) / lead);
  return 1.0 + m;
}

double newton_polish(const RealPolynomial& p, const RealPolynomial& dp,
                     double x) {
  double best = x;
  double best_val = std::abs(p(x));
  for (int it = 0; it < 20 && best_val > 0.0; ++it) {
    const double d = dp(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = x - p(x) / d;
    if (!std::isfinite(next)) break;
    const double v = std::abs(p(next));
    x = next;
    if (v < best_val) {
      best = next;
      best_val = v;
    } else if (v > 4.0 * best_val) {
      break;
    }
  }
  return best;
}

// Parlett-Reinsch diagonal balancing with radix-2 scalings; eigenvalues
// are unchanged, their sensitivity to rounding drops sharply for companion
// matrices of polynomials with widely spread roots.
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  for (int sweep = 0; !done && sweep < 1000; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

std::vector<Root> cluster(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<Root> out;
  for (double x : xs) {
    if (!out.empty() &&
        std::abs(x - out.back().value) <=
            1e-7 * std::max(1.0, std::abs(x))) {
      auto& r = out.back();
      r.value = (r.value * r.multiplicity + x) / (r.multiplicity + 1);
      ++r.multiplicity;
    } else {
      out.push_back({x, 1});
    }
  }
  return out;
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<double> coefficients)
    : c_(std::move(coefficients)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double RealPolynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double RealPolynomial::magnitude(double x) const noexcept {
  const double ax = std::abs(x);
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * ax + std::abs(*it);
  return acc;
}

RealPolynomial RealPolynomial::derivative() const {
  if (c_.size() <= 1) return RealPolynomial{};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * c_[k];
  return RealPolynomial(std::move(d));
}

RealPolynomial RealPolynomial::from_roots(std::span<const double> roots,
                                          double leading) {
  std::vector<double> c{leading};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return RealPolynomial(std::move(c));
}

std::vector<double> sign_change_roots(const RealPolynomial& p, double lo,
                                      double hi, int grid) {
  if (p.is_zero()) throw Error(ErrorCode::degenerate, "zero polynomial");
  if (p.degree() == 0) return {};
  const double bound = cauchy_bound(p.coefficients());
  const double a = std::max(lo, -bound);
  const double b = std::min(hi, bound);
  std::vector<double> out;
  if (!(a < b)) return out;

  const double h = (b - a) / grid;
  double x0 = a;
  double f0 = p(x0);
  for (int i = 1; i <= grid; ++i) {
    const double x1 = (i == grid) ? b : a + h * i;
    const double f1 = p(x1);
    if (f1 == 0.0 && i < grid) {
      out.push_back(x1);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      double l = x0, r = x1, fl = f0;
      for (int it = 0; it < 200 && r - l > 0.0; ++it) {
        const double m = 0.5 * (l + r);
        if (m <= l || m >= r) break;
        const double fm = p(m);
        if (fm == 0.0) {
          l = r = m;
          break;
        }
        if ((fm < 0.0) == (fl < 0.0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      out.push_back(0.5 * (l + r));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

namespace {

// q(x) / (x - e), remainder dropped
RealPolynomial deflate(const RealPolynomial& q, double e) {
  const auto c = q.coefficients();
  const int d = q.degree();
  std::vector<double> b(d);
  b[d - 1] = c[d];
  for (int k = d - 1; k >= 1; --k) b[k - 1] = c[k] + e * b[k];
  return RealPolynomial(std::move(b));
}

}  // namespace

std::vector<Root> real_roots(const RealPolynomial& p, double lo, double hi,
                             RootOptions opts) {
  if (!(lo < hi))
    throw Error(ErrorCode::invalid_argument, "root interval requires lo < hi");
  if (p.is_zero())
    throw Error(ErrorCode::degenerate, "zero polynomial has no isolated roots");

  const auto c = p.coefficients();
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;
  RealPolynomial q(std::vector<double>(c.begin() + zeros, c.end()));
  for (double e : {lo, hi})
    if (std::isfinite(e) && e != 0.0)
      while (q.degree() >= 1 && std::abs(q(e)) <= opts.endpoint_tol * q.magnitude(e))
        q = deflate(q, e);
  const int d = q.degree();

  std::vector<double> found;
  if (lo < 0.0 && 0.0 < hi)
    for (std::size_t i = 0; i < zeros; ++i) found.push_back(0.0);
  if (d <= 0) return cluster(std::move(found));

  const auto qc = q.coefficients();
  // x = s z with s the geometric mean root modulus keeps the companion
  // matrix entries of comparable size.
  const double s = std::pow(std::abs(qc[0] / qc[d]), 1.0 / d);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int k = 0; k < d; ++k)
    companion(k, d - 1) = -qc[k] * std::pow(s, k - d) / qc[d];

  balance(companion);

  const RealPolynomial dq = q.derivative();
  const auto accept = [&](double x) {
    return x > lo && x < hi && std::abs(q(x)) <= opts.tol * q.magnitude(x);
  };

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() == Eigen::Success) {
    for (const auto& z : solver.eigenvalues()) {
      const double modulus = std::abs(z);
      if (std::abs(z.imag()) > 1e-5 * modulus) continue;
      const double x = newton_polish(q, dq, s * z.real());
      if (accept(x)) found.push_back(x);
    }
  } else {
    for (double x : sign_change_roots(q, lo, hi))
      if (accept(x)) found.push_back(x);
  }
  return cluster(std::move(found));
}

}  // namespace rglab
