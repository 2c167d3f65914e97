#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "relaystab/errors.hpp"

namespace relaystab {

using cplx = std::complex<double>;

// BS relay queue in packet units: r2 moves one packet, r1 moves k.
// From 0: +1 w.p. a02, +k w.p. a01.
// From n>=1: +1 a12, +k a11, -1 b12, -k b11 (an r1 grant with n<k moves nothing).
struct ChainSpec {
  double a01 = 0, a02 = 0, a11 = 0, a12 = 0, b11 = 0, b12 = 0;
  int k = 1;

  double a0() const { return a02 + k * a01; }
  double a1() const { return a12 + k * a11; }
  double b() const { return b12 + k * b11; }
  // mean increment per slot away from the empty state
  double drift() const { return a1() - b(); }

  void validate() const {
    constexpr double tol = 1e-12;
    for (double p : {a01, a02, a11, a12, b11, b12})
      if (!(p >= -tol && p <= 1.0 + tol)) throw std::invalid_argument("chain probability outside [0,1]");
    if (a01 + a02 > 1.0 + tol || a11 + a12 + b11 + b12 > 1.0 + tol)
      throw std::invalid_argument("chain transition probabilities exceed one");
    if (k < 1) throw std::invalid_argument("rate ratio k must be >= 1");
  }
};

inline constexpr double kDriftTolerance = 1e-9;
inline constexpr double kUnitDiskMargin = 1e-9;
inline constexpr double kRootSeparation = 1e-7;
inline constexpr double kConditionWarning = 1e10;

// cofactor of the balance polynomial after removing (x-1); coefficients low -> high
inline std::vector<double> cofactor_coefficients(const ChainSpec& c) {
  const int k = c.k;
  std::vector<double> q(static_cast<std::size_t>(2 * k), 0.0);
  for (int i = 0; i + 2 <= k; ++i) q[i] = -c.a11;
  q[k - 1] = -(c.a11 + c.a12);
  q[k] = c.b11 + c.b12;
  for (int i = k + 1; i <= 2 * k - 1; ++i) q[i] = c.b11;
  return q;
}

namespace detail {

inline cplx horner(const std::vector<double>& q, cplx x, cplx* deriv = nullptr) {
  cplx p = 0, dp = 0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  if (deriv) *deriv = dp;
  return p;
}

inline std::vector<cplx> polynomial_roots(std::vector<double> q) {
  double scale = 0;
  for (double v : q) scale = std::max(scale, std::abs(v));
  while (!q.empty() && std::abs(q.back()) <= 1e-15 * scale) q.pop_back();
  std::vector<cplx> roots;
  std::size_t lead_zeros = 0;
  while (lead_zeros < q.size() && q[lead_zeros] == 0.0) ++lead_zeros;
  for (std::size_t i = 0; i < lead_zeros; ++i) roots.emplace_back(0.0, 0.0);
  std::vector<double> r(q.begin() + static_cast<std::ptrdiff_t>(lead_zeros), q.end());
  if (r.size() < 2) return roots;
  const auto n = static_cast<Eigen::Index>(r.size() - 1);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -r[static_cast<std::size_t>(i)] / r.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx x = es.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      cplx d;
      const cplx p = horner(r, x, &d);
      if (std::abs(d) == 0.0) break;
      const cplx nx = x - p / d;
      if (!std::isfinite(nx.real()) || !std::isfinite(nx.imag())) break;
      if (std::abs(horner(r, nx)) > std::abs(p)) break;
      x = nx;
    }
    roots.push_back(x);
  }
  return roots;
}

}  // namespace detail

// all roots of the cofactor, then the ones strictly inside the unit disk
inline std::vector<cplx> all_cofactor_roots(const ChainSpec& spec) {
  return detail::polynomial_roots(cofactor_coefficients(spec));
}

inline std::vector<cplx> characteristic_roots(const ChainSpec& spec) {
  spec.validate();
  if (spec.drift() >= -kDriftTolerance)
    throw NoInteriorRoot("relay queue has nonnegative drift");
  std::vector<cplx> inside;
  for (const auto& x : all_cofactor_roots(spec))
    if (std::abs(x) < 1.0 - kUnitDiskMargin) inside.push_back(x);
  if (inside.empty()) throw NoInteriorRoot("no cofactor root inside the unit disk");
  return inside;
}

struct StationaryDist {
  int k = 1;
  std::vector<double> head;  // pi_0 .. pi_k
  std::vector<cplx> tail_roots;
  // pi(n) = sum c_r x_r^(n-k-1) for n > k
  std::vector<cplx> tail_coefs;
  double pi0 = 1.0;
  double condition = 1.0;
  bool ill_conditioned = false;

  cplx tail(std::size_t n) const {
    cplx s = 0;
    const auto e = static_cast<double>(n - head.size());
    for (std::size_t r = 0; r < tail_roots.size(); ++r) s += tail_coefs[r] * std::pow(tail_roots[r], e);
    return s;
  }

  double pi(std::size_t n) const { return n < head.size() ? head[n] : tail(n).real(); }
  double imag_part(std::size_t n) const { return n < head.size() ? 0.0 : tail(n).imag(); }

  // sum over n > k in closed form
  double tail_mass() const {
    cplx s = 0;
    for (std::size_t r = 0; r < tail_roots.size(); ++r) s += tail_coefs[r] / (1.0 - tail_roots[r]);
    return s.real();
  }

  double total_mass() const {
    double h = 0;
    for (double v : head) h += v;
    return h + tail_mass();
  }
};

namespace detail {

// inflow/outflow terms of the balance equation at state i: sum coef * pi(m) = 0
template <class Add>
void balance_terms(const ChainSpec& c, std::size_t i, Add&& add) {
  const auto k = static_cast<std::size_t>(c.k);
  const double a1 = c.a11 + c.a12, b1 = c.b11 + c.b12;
  double out;
  if (i == 0)
    out = c.a01 + c.a02;
  else if (i < k)
    out = a1 + c.b12;
  else
    out = a1 + b1;
  add(i, out);
  if (i == 1) add(0, -c.a02);
  if (i == k) add(0, -c.a01);
  if (i >= 2) add(i - 1, -c.a12);
  if (i >= k + 1) add(i - k, -c.a11);
  add(i + 1, -c.b12);
  add(i + k, -c.b11);
}

}  // namespace detail

inline double balance_residual(const ChainSpec& spec, const StationaryDist& dist, std::size_t i) {
  double r = 0;
  detail::balance_terms(spec, i, [&](std::size_t m, double coef) { r += coef * dist.pi(m); });
  return r;
}

inline StationaryDist solve_stationary(const ChainSpec& spec) {
  const auto roots_all = characteristic_roots(spec);
  std::vector<cplx> roots;
  for (const auto& x : roots_all)
    if (std::abs(x) > 1e-13) roots.push_back(x);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < kRootSeparation)
        throw SingularSystem("near-multiple characteristic roots");

  const auto k = static_cast<std::size_t>(spec.k);
  const std::size_t R = roots.size();
  const auto n = static_cast<Eigen::Index>(k + 1 + R);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

  auto add_term = [&](Eigen::Index row, std::size_t m, double coef) {
    if (m <= k) {
      A(row, static_cast<Eigen::Index>(m)) += coef;
    } else {
      for (std::size_t r = 0; r < R; ++r)
        A(row, static_cast<Eigen::Index>(k + 1 + r)) +=
            coef * std::pow(roots[r], static_cast<double>(m - k - 1));
    }
  };
  for (Eigen::Index row = 0; row + 1 < n; ++row)
    detail::balance_terms(spec, static_cast<std::size_t>(row),
                          [&](std::size_t m, double coef) { add_term(row, m, coef); });
  const Eigen::Index last = n - 1;
  for (std::size_t m = 0; m <= k; ++m) A(last, static_cast<Eigen::Index>(m)) = 1.0;
  for (std::size_t r = 0; r < R; ++r)
    A(last, static_cast<Eigen::Index>(k + 1 + r)) = 1.0 / (1.0 - roots[r]);
  rhs(last) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15)) throw SingularSystem("boundary system is numerically singular");
  const Eigen::VectorXcd z = lu.solve(rhs);

  StationaryDist d;
  d.k = spec.k;
  d.head.resize(k + 1);
  for (std::size_t m = 0; m <= k; ++m) d.head[m] = z(static_cast<Eigen::Index>(m)).real();
  d.tail_roots = roots;
  d.tail_coefs.resize(R);
  for (std::size_t r = 0; r < R; ++r) d.tail_coefs[r] = z(static_cast<Eigen::Index>(k + 1 + r));
  d.pi0 = d.head[0];
  d.condition = 1.0 / rcond;
  d.ill_conditioned = d.condition > kConditionWarning;

  // equations beyond the square system must hold too
  for (std::size_t i = 0; i <= 2 * k + 2; ++i)
    if (std::abs(balance_residual(spec, d, i)) > 1e-9)
      throw SingularSystem("stationary solution fails balance equations");
  return d;
}

inline double pi0_identity_check(const ChainSpec& spec, const StationaryDist& dist) {
  const double a0 = spec.a0(), a1 = spec.a1(), b = spec.b();
  const double denom = b - a1 + a0;
  const double pi0_approx = (b - a1) / denom;
  double s = 0;
  for (int n = 1; n <= spec.k - 1; ++n) s += dist.pi(static_cast<std::size_t>(n));
  const double rhs = pi0_approx - spec.k * spec.b11 * s / denom;
  return std::abs(dist.pi0 - rhs);
}

}  // namespace relaystab
