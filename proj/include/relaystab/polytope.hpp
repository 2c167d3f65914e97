#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaystab/errors.hpp"
#include "relaystab/lp.hpp"

namespace relaystab {

using Point = std::vector<double>;

inline constexpr double kContainTolerance = 1e-9;

// points dominated by a generator, or sub-convex combinations sum g_i x_i with sum g_i <= 1
class CoSet {
 public:
  CoSet() = default;
  explicit CoSet(std::size_t dim) : dim_(dim) {}
  // keeps first-seen order, drops exact duplicates
  CoSet(std::size_t dim, std::vector<Point> gens) : dim_(dim) {
    for (const auto& g : gens) check(g);
    std::vector<std::size_t> idx(gens.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return gens[a] < gens[b]; });
    std::vector<bool> dup(gens.size(), false);
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (gens[idx[i]] == gens[idx[i - 1]]) dup[idx[i]] = true;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!dup[i]) gens_.push_back(std::move(gens[i]));
  }

  void add(Point p) {
    check(p);
    for (const auto& g : gens_)
      if (g == p) return;
    gens_.push_back(std::move(p));
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const std::vector<Point>& generators() const { return gens_; }
  const Point& operator[](std::size_t i) const { return gens_[i]; }

 private:
  void check(const Point& p) const {
    if (p.size() != dim_) throw DimensionMismatch("generator dimension mismatch");
    for (double v : p)
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("generators must be finite and nonnegative");
  }

  std::size_t dim_ = 0;
  std::vector<Point> gens_;
};

namespace detail {

inline bool dominated_by(std::span<const double> x, std::span<const double> g) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > g[i]) return false;
  return true;
}

// min sum g  s.t.  G g >= x, g >= 0, over generators except `skip`
inline double gauge_impl(const std::vector<Point>& gens, std::span<const double> x,
                         std::size_t skip = std::numeric_limits<std::size_t>::max()) {
  const std::size_t n = x.size();
  std::vector<std::size_t> cols;
  cols.reserve(gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (j != skip) cols.push_back(j);

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > 0.0) rows.push_back(i);
  if (rows.empty()) return 0.0;

  // cheap exits: a dominating generator means gauge <= 1
  double best_single = std::numeric_limits<double>::infinity();
  for (auto j : cols) {
    double s = 0;
    for (auto i : rows) {
      if (gens[j][i] <= 0.0) {
        s = std::numeric_limits<double>::infinity();
        break;
      }
      s = std::max(s, x[i] / gens[j][i]);
    }
    best_single = std::min(best_single, s);
  }
  for (auto i : rows) {
    bool support = false;
    for (auto j : cols)
      if (gens[j][i] > 0.0) {
        support = true;
        break;
      }
    if (!support) return std::numeric_limits<double>::infinity();
  }
  if (rows.size() == 1) return best_single;

  const std::size_t m = rows.size();
  // scale each row by the largest generator coordinate so the tableau stays O(1)
  std::vector<double> scale(m, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (auto j : cols) scale[r] = std::max(scale[r], gens[j][rows[r]]);
  auto coef = [&](std::size_t r, std::size_t j) { return gens[j][rows[r]] / scale[r]; };

  // column generation: restricted LP over a working set, priced against every generator
  std::vector<std::size_t> work;
  std::vector<char> in_work(gens.size(), 0);
  auto add = [&](std::size_t j) {
    if (!in_work[j]) {
      in_work[j] = 1;
      work.push_back(j);
    }
  };
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t arg = cols.front();
    for (auto j : cols)
      if (gens[j][rows[r]] > gens[arg][rows[r]]) arg = j;
    add(arg);
  }
  {
    std::vector<std::pair<double, std::size_t>> ratio;
    for (auto j : cols) {
      double s = 0;
      for (std::size_t r = 0; r < m; ++r) s = std::max(s, x[rows[r]] / scale[r] / std::max(coef(r, j), 1e-300));
      ratio.emplace_back(s, j);
    }
    const std::size_t keep = std::min(ratio.size(), 4 * m);
    std::partial_sort(ratio.begin(), ratio.begin() + static_cast<std::ptrdiff_t>(keep), ratio.end());
    for (std::size_t i = 0; i < keep; ++i) add(ratio[i].second);
  }

  double value = std::numeric_limits<double>::infinity();
  std::vector<double> y(m);
  std::vector<std::pair<double, std::size_t>> priced;
  for (int round = 0; round < 200; ++round) {
    const std::size_t nc = work.size() + m;
    std::vector<double> A(m * nc, 0.0), b(m), c(nc, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < work.size(); ++j) A[r * nc + j] = coef(r, work[j]);
      A[r * nc + work.size() + r] = -1.0;
      b[r] = x[rows[r]] / scale[r];
    }
    for (std::size_t j = 0; j < work.size(); ++j) c[j] = 1.0;
    DenseSimplex lp(m, nc);
    const auto res = lp.solve(A, b, c);
    if (res.status != LpStatus::optimal) break;
    value = res.value;
    for (std::size_t r = 0; r < m; ++r) y[r] = std::max(0.0, res.reduced[work.size() + r]);

    priced.clear();
    for (auto j : cols) {
      if (in_work[j]) continue;
      double d = 1.0;
      for (std::size_t r = 0; r < m; ++r) d -= coef(r, j) * y[r];
      if (d < -1e-10) priced.emplace_back(d, j);
    }
    if (priced.empty()) return std::min(value, best_single);
    const std::size_t keep = std::min<std::size_t>(priced.size(), 2 * m + 8);
    std::partial_sort(priced.begin(), priced.begin() + static_cast<std::ptrdiff_t>(keep), priced.end());
    for (std::size_t i = 0; i < keep; ++i) add(priced[i].second);
  }
  // restricted optimum is still an upper bound on the gauge
  return std::min(value, best_single);
}

}  // namespace detail

// smallest t with x in t * co(S); +inf when some positive coordinate has no support
inline double gauge(const CoSet& s, std::span<const double> x) {
  if (x.size() != s.dim()) throw DimensionMismatch("query dimension mismatch");
  return detail::gauge_impl(s.generators(), x);
}

inline bool contains(const CoSet& s, std::span<const double> x, double tol = kContainTolerance) {
  return gauge(s, x) <= 1.0 + tol;
}

// largest gauge excess of inner's generators (shifted down by eps) w.r.t. outer
inline double contains_set(const CoSet& inner, const CoSet& outer, double eps = 0.0) {
  if (inner.dim() != outer.dim()) throw DimensionMismatch("sets differ in dimension");
  if (eps < 0.0) throw std::invalid_argument("inflation must be nonnegative");
  double worst = 0.0;
  Point q(inner.dim());
  for (const auto& g : inner.generators()) {
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::max(0.0, g[i] - eps);
    const double v = gauge(outer, q) - 1.0;
    if (v > kContainTolerance) worst = std::max(worst, v);
  }
  return worst;
}

inline CoSet scaled(const CoSet& s, double factor) {
  std::vector<Point> g = s.generators();
  for (auto& p : g)
    for (auto& v : p) v *= factor;
  return CoSet(s.dim(), std::move(g));
}

namespace detail {

inline std::vector<std::size_t> pareto_indices(const std::vector<Point>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto sum = [&](std::size_t i) { return std::accumulate(pts[i].begin(), pts[i].end(), 0.0); };
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sum(a) > sum(b); });
  std::vector<std::size_t> keep;
  for (auto i : idx) {
    bool dom = false;
    for (auto j : keep)
      if (dominated_by(pts[i], pts[j])) {
        dom = true;
        break;
      }
    if (!dom) keep.push_back(i);
  }
  return keep;
}

// upper concave chain of a Pareto set; the extreme points in x are always vertices
inline std::vector<std::size_t> hull2d(const std::vector<Point>& pts, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a][0] < pts[b][0]; });
  if (idx.size() <= 2) return idx;
  std::vector<std::size_t> h;
  for (auto i : idx) {
    const auto& p = pts[i];
    while (h.size() >= 2) {
      const auto& a = pts[h[h.size() - 2]];
      const auto& o = pts[h.back()];
      const double ux = o[0] - a[0], uy = o[1] - a[1], vx = p[0] - a[0], vy = p[1] - a[1];
      const double cross = ux * vy - uy * vx;
      if (cross >= -1e-12 * std::hypot(ux, uy) * std::hypot(vx, vy)) h.pop_back();
      else break;
    }
    h.push_back(i);
  }
  return h;
}

}  // namespace detail

// indices of the generators that survive dominance and interior filtering;
// the LP pass is skipped above lp_limit survivors
inline std::vector<std::size_t> reduce_indices(const std::vector<Point>& pts, std::size_t dim,
                                               std::size_t lp_limit = 4000) {
  auto keep = detail::pareto_indices(pts);
  // the zero vector is implicit
  std::erase_if(keep, [&](std::size_t i) {
    return std::all_of(pts[i].begin(), pts[i].end(), [](double v) { return v == 0.0; });
  });
  if (dim == 2) {
    keep = detail::hull2d(pts, keep);
  } else if (keep.size() <= lp_limit) {
    std::vector<Point> cur;
    for (auto i : keep) cur.push_back(pts[i]);
    for (std::size_t j = cur.size(); j-- > 0;) {
      if (cur.size() <= 1) break;
      if (detail::gauge_impl(cur, cur[j], j) <= 1.0 + 1e-12) {
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(j));
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

inline CoSet reduce(const CoSet& s, std::size_t lp_limit = 4000) {
  const auto& pts = s.generators();
  std::vector<Point> out;
  for (auto i : reduce_indices(pts, s.dim(), lp_limit)) out.push_back(pts[i]);
  return CoSet(s.dim(), std::move(out));
}

}  // namespace relaystab
