#pragma once

// Small dense exact linear algebra: reduced row echelon form and a two-phase
// simplex with Bland's rule, used by the support solvers.

#include <algorithm>
#include <optional>
#include <vector>

#include "ppad/games.hpp"
#include "ppad/rational.hpp"

namespace ppad::linear {

struct Rref {
  Matrix reduced;                  // augmented matrix [A | b] in RREF
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
  bool consistent = true;

  std::size_t rank() const noexcept { return pivots.size(); }
  std::size_t unknowns() const noexcept { return reduced.cols - 1; }
  bool unique() const noexcept { return consistent && rank() == unknowns(); }

  /// The solution with every free variable set to zero.
  std::vector<Rational> particular() const {
    std::vector<Rational> x(unknowns(), Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = reduced(r, reduced.cols - 1);
    return x;
  }
};

/// Gauss-Jordan elimination of an augmented matrix (last column = rhs).
inline Rref rref(Matrix aug) {
  Rref out;
  const std::size_t n = aug.cols - 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < aug.rows; ++col) {
    std::size_t p = row;
    while (p < aug.rows && aug(p, col) == 0) ++p;
    if (p == aug.rows) continue;
    if (p != row) {
      for (std::size_t c = 0; c < aug.cols; ++c) std::swap(aug(p, c), aug(row, c));
    }
    const Rational inv = 1 / aug(row, col);
    for (std::size_t c = col; c < aug.cols; ++c) aug(row, c) *= inv;
    for (std::size_t r = 0; r < aug.rows; ++r) {
      if (r == row || aug(r, col) == 0) continue;
      const Rational f = aug(r, col);
      for (std::size_t c = col; c < aug.cols; ++c) aug(r, c) -= f * aug(row, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < aug.rows; ++r) {
    if (aug(r, n) != 0) out.consistent = false;
  }
  out.reduced = std::move(aug);
  return out;
}

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> z;
  Rational value;
};

/// Dense tableau simplex over {z >= 0 : A z = b} using Bland's rule. Columns
/// can be barred from entering, which is how an optimal face is kept while
/// later objectives are optimised.
class Simplex {
 public:
  Simplex(const Matrix& a, const std::vector<Rational>& b)
      : m_(a.rows), n_(a.cols), width_(a.cols + a.rows + 1), t_(a.rows, width_), basis_(a.rows),
        alive_(a.rows, true), allowed_(a.cols + a.rows, true) {
    for (std::size_t r = 0; r < m_; ++r) {
      const bool flip = b[r] < 0;
      for (std::size_t j = 0; j < n_; ++j) t_(r, j) = flip ? Rational(-a(r, j)) : a(r, j);
      t_(r, n_ + r) = 1;
      t_(r, width_ - 1) = flip ? Rational(-b[r]) : b[r];
      basis_[r] = n_ + r;
    }
  }

  /// Phase 1. On success the artificial columns are gone for good.
  bool feasible() {
    std::vector<Rational> cost(n_ + m_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) cost[n_ + r] = 1;
    run(cost);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_ && t_(r, width_ - 1) != 0) return false;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      std::size_t j = 0;
      while (j < n_ && t_(r, j) == 0) ++j;
      if (j < n_) {
        pivot(r, j);
      } else {
        alive_[r] = false;  // redundant equation
      }
    }
    for (std::size_t j = n_; j < n_ + m_; ++j) allowed_[j] = false;
    return true;
  }

  /// Phase 2 for `cost` (length n). False when unbounded.
  bool minimise(const std::vector<Rational>& cost) {
    std::vector<Rational> full(n_ + m_, Rational(0));
    std::copy(cost.begin(), cost.end(), full.begin());
    return run(full);
  }

  /// After minimise(cost): bars every column whose reduced cost is positive,
  /// so the feasible set becomes the optimal face.
  void keep_optimal_face(const std::vector<Rational>& cost) {
    std::vector<Rational> full(n_ + m_, Rational(0));
    std::copy(cost.begin(), cost.end(), full.begin());
    for (std::size_t j = 0; j < n_; ++j) {
      if (allowed_[j] && !is_basic(j) && reduced_cost(full, j) > 0) allowed_[j] = false;
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> z(n_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (alive_[r] && basis_[r] < n_) z[basis_[r]] = t_(r, width_ - 1);
    }
    return z;
  }

 private:
  bool is_basic(std::size_t j) const {
    for (std::size_t r = 0; r < m_; ++r) {
      if (alive_[r] && basis_[r] == j) return true;
    }
    return false;
  }

  Rational reduced_cost(const std::vector<Rational>& cost, std::size_t j) const {
    Rational d = cost[j];
    for (std::size_t r = 0; r < m_; ++r) {
      if (alive_[r] && cost[basis_[r]] != 0) d -= cost[basis_[r]] * t_(r, j);
    }
    return d;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = 1 / t_(pr, pc);
    for (std::size_t j = 0; j < width_; ++j) {
      if (t_(pr, j) != 0) t_(pr, j) *= inv;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr || !alive_[r] || t_(r, pc) == 0) continue;
      const Rational f = t_(r, pc);
      for (std::size_t j = 0; j < width_; ++j) {
        if (t_(pr, j) != 0) t_(r, j) -= f * t_(pr, j);
      }
    }
    basis_[pr] = pc;
  }

  bool run(const std::vector<Rational>& cost) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < n_ + m_ && !enter; ++j) {
        if (allowed_[j] && !is_basic(j) && reduced_cost(cost, j) < 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (!alive_[r] || t_(r, *enter) <= 0) continue;
        Rational ratio = t_(r, width_ - 1) / t_(r, *enter);
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  std::size_t m_, n_, width_;
  Matrix t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> alive_;
  std::vector<bool> allowed_;
};

/// minimise c.z subject to A z = b, z >= 0.
inline LpResult lp_minimize(const Matrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c) {
  Simplex s(a, b);
  if (!s.feasible()) return {LpStatus::Infeasible, {}, 0};
  if (!s.minimise(c)) return {LpStatus::Unbounded, {}, 0};
  LpResult out{LpStatus::Optimal, s.solution(), 0};
  for (std::size_t j = 0; j < c.size(); ++j) out.value += c[j] * out.z[j];
  return out;
}

/// Lexicographically least z (in the order of `order`) with A z = b, z >= 0,
/// or nullopt when infeasible.
inline std::optional<std::vector<Rational>> lexmin(const Matrix& a, const std::vector<Rational>& b,
                                                   const std::vector<std::size_t>& order) {
  Simplex s(a, b);
  if (!s.feasible()) return std::nullopt;
  for (std::size_t k : order) {
    std::vector<Rational> c(a.cols, Rational(0));
    c[k] = 1;
    s.minimise(c);  // bounded below by z >= 0
    s.keep_optimal_face(c);
  }
  return s.solution();
}

}  // namespace ppad::linear
