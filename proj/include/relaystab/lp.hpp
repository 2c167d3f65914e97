#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace relaystab {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> z;
  std::vector<double> reduced;  // phase-2 reduced costs of the original columns
};

// min c.z  s.t.  A z = b, z >= 0, with b >= 0. Dense two-phase tableau.
// A is row-major, rows x cols.
class DenseSimplex {
 public:
  DenseSimplex(std::size_t rows, std::size_t cols, double tol = 1e-11)
      : m_(rows), n_(cols), tol_(tol) {}

  LpResult solve(const std::vector<double>& A, const std::vector<double>& b,
                 const std::vector<double>& c) {
    const std::size_t width = n_ + m_ + 1;  // originals, artificials, rhs
    t_.assign((m_ + 1) * width, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = A[i * n_ + j];
      at(i, n_ + i) = 1.0;
      at(i, width - 1) = b[i];
      basis_[i] = n_ + i;
    }
    // phase 1: minimise the sum of artificials
    for (std::size_t j = 0; j < width; ++j) {
      if (j >= n_ && j < n_ + m_) continue;
      double s = 0;
      for (std::size_t i = 0; i < m_; ++i) s += at(i, j);
      at(m_, j) = -s;
    }
    if (!iterate(n_ + m_)) return {LpStatus::unbounded, -std::numeric_limits<double>::infinity(), {}, {}};
    if (-at(m_, width - 1) > 1e-9 * (1.0 + max_abs(b))) return {};

    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
    }

    // phase 2 reduced costs
    for (std::size_t j = 0; j < width; ++j) at(m_, j) = j < n_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t bj = basis_[i];
      const double cb = bj < n_ ? c[bj] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(m_, j) -= cb * at(i, j);
    }
    if (!iterate(n_)) return {LpStatus::unbounded, -std::numeric_limits<double>::infinity(), {}, {}};

    LpResult r;
    r.status = LpStatus::optimal;
    r.z.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) r.z[basis_[i]] = std::max(0.0, at(i, width - 1));
    r.value = 0;
    for (std::size_t j = 0; j < n_; ++j) r.value += c[j] * r.z[j];
    r.reduced.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) r.reduced[j] = at(m_, j);
    return r;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + m_ + 1) + j]; }

  static double max_abs(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  }

  void pivot(std::size_t r, std::size_t col) {
    const std::size_t width = n_ + m_ + 1;
    const double p = at(r, col);
    for (std::size_t j = 0; j < width; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(r, j);
    }
    basis_[r] = col;
  }

  // columns >= limit never enter; false on unboundedness. Dantzig pricing with a
  // two-pass ratio test preferring large pivots; Bland's rule after many pivots.
  // A ray column whose reduced cost is only rounding noise is frozen instead.
  bool iterate(std::size_t limit) {
    const std::size_t rhs = n_ + m_;
    const std::size_t max_iter = 50 * (n_ + m_ + 10);
    const std::size_t bland_after = 5 * (n_ + m_ + 10);
    std::vector<bool> frozen(limit, false);
    for (std::size_t it = 0; it < max_iter; ++it) {
      const bool bland = it >= bland_after;
      std::size_t enter = limit;
      double most = -tol_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (frozen[j]) continue;
        const double rc = at(m_, j);
        if (rc < most) {
          enter = j;
          most = rc;
          if (bland) break;
        }
      }
      if (enter == limit) return true;
      double col_max = 0;
      for (std::size_t i = 0; i < m_; ++i) col_max = std::max(col_max, std::abs(at(i, enter)));
      auto ratio_test = [&](double piv_tol) {
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a > piv_tol) min_ratio = std::min(min_ratio, (std::max(0.0, at(i, rhs)) + 1e-12) / a);
        }
        std::size_t leave = m_;
        double best_piv = 0;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a <= piv_tol || std::max(0.0, at(i, rhs)) / a > min_ratio) continue;
          if (bland ? (leave == m_ || basis_[i] < basis_[leave]) : a > best_piv) {
            best_piv = a;
            leave = i;
          }
        }
        return leave;
      };
      std::size_t leave = ratio_test(std::max(tol_, 1e-9 * col_max));
      if (leave == m_) leave = ratio_test(tol_);
      if (leave == m_) {
        if (at(m_, enter) > -std::max(1e-7, 1e-9 * col_max)) {
          frozen[enter] = true;
          continue;
        }
        return false;
      }
      pivot(leave, enter);
    }
    return true;
  }

  std::size_t m_, n_;
  double tol_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace relaystab
