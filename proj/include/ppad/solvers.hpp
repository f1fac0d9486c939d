#pragma once

// Exact equilibrium solvers: support solving and enumeration for bimatrix
// games, Lemke-Howson pivoting, and the staged k-player approximation.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppad/error.hpp"
#include "ppad/exact_linear.hpp"
#include "ppad/games.hpp"
#include "ppad/random.hpp"
#include "ppad/rational.hpp"

namespace ppad {

struct SupportPair {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

struct SupportSolution {
  MixedProfile profile;
  /// The equality system had a continuum of solutions; the profile is the
  /// lexicographically least feasible one.
  bool degenerate = false;
};

namespace detail {

struct SideSolution {
  std::vector<Rational> strategy;
  bool degenerate = false;
};

// Mixed strategy over `own` actions making every `opp` action of the opponent
// equally good and no other opponent action better. m(a, b) is the
// opponent's payoff when we play a and it plays b.
inline std::optional<SideSolution> solve_side(const Matrix& m, const std::vector<std::size_t>& own,
                                              const std::vector<std::size_t>& opp) {
  const std::size_t t = own.size();
  std::vector<bool> in_opp(m.cols, false);
  for (auto j : opp) in_opp[j] = true;

  Matrix aug(opp.size() + 1, t + 2);
  for (std::size_t r = 0; r < opp.size(); ++r) {
    for (std::size_t c = 0; c < t; ++c) aug(r, c) = m(own[c], opp[r]);
    aug(r, t) = -1;
  }
  for (std::size_t c = 0; c < t; ++c) aug(opp.size(), c) = 1;
  aug(opp.size(), t + 1) = 1;
  const linear::Rref red = linear::rref(std::move(aug));
  if (!red.consistent) return std::nullopt;

  std::vector<Rational> full(m.rows, Rational(0));
  if (red.unique()) {
    const auto sol = red.particular();
    for (std::size_t c = 0; c < t; ++c) {
      if (sol[c] < 0) return std::nullopt;
      full[own[c]] = sol[c];
    }
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (in_opp[j]) continue;
      Rational payoff = 0;
      for (std::size_t c = 0; c < t; ++c) payoff += m(own[c], j) * sol[c];
      if (payoff > sol[t]) return std::nullopt;
    }
    return SideSolution{std::move(full), false};
  }

  // Variables: x (t), v+ , v-, one slack per off-support opponent action.
  const std::size_t off = m.cols - opp.size();
  Matrix a(m.cols + 1, t + 2 + off);
  std::vector<Rational> b(m.cols + 1, Rational(0));
  std::size_t slack = 0;
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t c = 0; c < t; ++c) a(j, c) = m(own[c], j);
    a(j, t) = -1;
    a(j, t + 1) = 1;
    if (!in_opp[j]) a(j, t + 2 + slack++) = 1;
  }
  for (std::size_t c = 0; c < t; ++c) a(m.cols, c) = 1;
  b[m.cols] = 1;
  std::vector<std::size_t> order(t);
  for (std::size_t c = 0; c < t; ++c) order[c] = c;
  auto z = linear::lexmin(std::move(a), std::move(b), order);
  if (!z) return std::nullopt;
  for (std::size_t c = 0; c < t; ++c) full[own[c]] = (*z)[c];
  return SideSolution{std::move(full), true};
}

inline std::vector<std::size_t> bits_to_indices(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Equilibrium with the given supports: support actions are equally good and
/// at least as good as any other action, probabilities are non-negative.
inline std::optional<SupportSolution> solve_support(const BimatrixGame& g, const SupportPair& sp) {
  if (sp.rows.empty() || sp.cols.empty()) throw ShapeError("supports must be non-empty");
  for (auto i : sp.rows) {
    if (i >= g.rows()) throw ShapeError("row support index out of range");
  }
  for (auto j : sp.cols) {
    if (j >= g.cols()) throw ShapeError("column support index out of range");
  }
  auto x = detail::solve_side(g.col_payoffs(), sp.rows, sp.cols);
  if (!x) return std::nullopt;
  auto y = detail::solve_side(g.row_payoffs().transposed(), sp.cols, sp.rows);
  if (!y) return std::nullopt;
  return SupportSolution{MixedProfile{{std::move(x->strategy), std::move(y->strategy)}},
                         x->degenerate || y->degenerate};
}

/// Every equilibrium found by solving all support pairs; sorted and
/// deduplicated. Both dimensions must be at most 8.
inline std::vector<MixedProfile> support_enumeration(const BimatrixGame& g) {
  if (g.rows() > 8 || g.cols() > 8) {
    throw CapExceeded("support_enumeration: dimensions " + std::to_string(g.rows()) + "x" +
                      std::to_string(g.cols()) + " exceed cap 8x8");
  }
  const Matrix rt = g.row_payoffs().transposed();
  std::set<MixedProfile> found;
  for (std::uint64_t rmask = 1; rmask < (std::uint64_t{1} << g.rows()); ++rmask) {
    const auto rows = detail::bits_to_indices(rmask);
    for (std::uint64_t cmask = 1; cmask < (std::uint64_t{1} << g.cols()); ++cmask) {
      const auto cols = detail::bits_to_indices(cmask);
      auto x = detail::solve_side(g.col_payoffs(), rows, cols);
      if (!x) continue;
      auto y = detail::solve_side(rt, cols, rows);
      if (!y) continue;
      found.insert(MixedProfile{{std::move(x->strategy), std::move(y->strategy)}});
    }
  }
  return {found.begin(), found.end()};
}

/// Conservative nondegeneracy test: false whenever some mixed strategy on k
/// actions could make k+1 opponent actions equally good (signs ignored). A
/// true answer guarantees the game is nondegenerate.
inline bool is_generic(const BimatrixGame& g) {
  auto side_ok = [](const Matrix& m) {
    for (std::uint64_t own = 1; own < (std::uint64_t{1} << m.rows); ++own) {
      const auto t = detail::bits_to_indices(own);
      const std::size_t need = t.size() + 1;
      if (need > m.cols) continue;
      for (std::uint64_t opp = 1; opp < (std::uint64_t{1} << m.cols); ++opp) {
        if (static_cast<std::size_t>(std::popcount(opp)) != need) continue;
        const auto j = detail::bits_to_indices(opp);
        Matrix aug(need + 1, t.size() + 2);
        for (std::size_t r = 0; r < need; ++r) {
          for (std::size_t c = 0; c < t.size(); ++c) aug(r, c) = m(t[c], j[r]);
          aug(r, t.size()) = -1;
        }
        for (std::size_t c = 0; c < t.size(); ++c) aug(need, c) = 1;
        aug(need, t.size() + 1) = 1;
        if (linear::rref(std::move(aug)).consistent) return false;
      }
    }
    return true;
  };
  return side_ok(g.col_payoffs()) && side_ok(g.row_payoffs().transposed());
}

// ---------------------------------------------------------------------------
// Lemke-Howson
//
// Labels are 0-based: 0..n1-1 are the row player's actions, n1..n1+n2-1 the
// column player's. With A, B the payoff matrices shifted to be positive, the
// polytopes are P = {x >= 0 : B^T x <= 1} and Q = {y >= 0 : A y <= 1}. In P,
// label i is x_i and label n1+j is the slack of column j; in Q, label n1+j is
// y_j and label i is the slack of row i.

struct LemkeHowsonOptions {
  bool lexicographic = true;
  bool record_path = false;
};

struct LemkeHowsonResult {
  MixedProfile profile;
  std::size_t pivots = 0;
  /// Basis pair visited before each pivot and after the last one: the sorted
  /// basic labels of P, then those of Q offset by n1+n2.
  std::vector<std::vector<std::size_t>> path;
};

namespace detail {

struct LhTableau {
  Matrix t;                         // rows x (labels + 1)
  std::vector<std::size_t> basis;   // basic label per row
  std::vector<std::size_t> slacks;  // labels whose columns started as the identity

  std::vector<std::size_t> sorted_basis() const {
    auto b = basis;
    std::sort(b.begin(), b.end());
    return b;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = 1 / t(pr, pc);
    for (std::size_t j = 0; j < t.cols; ++j) t(pr, j) *= inv;
    for (std::size_t r = 0; r < t.rows; ++r) {
      if (r == pr || t(r, pc) == 0) continue;
      const Rational f = t(r, pc);
      for (std::size_t j = 0; j < t.cols; ++j) t(r, j) -= f * t(pr, j);
    }
    basis[pr] = pc;
  }

  // Row leaving when `label` enters: minimum ratio, ties broken
  // lexicographically on the inverse-basis columns when enabled.
  std::size_t ratio_test(std::size_t label, bool lexicographic) const {
    const std::size_t rhs = t.cols - 1;
    std::optional<std::size_t> best;
    bool tied = false;
    for (std::size_t r = 0; r < t.rows; ++r) {
      if (t(r, label) <= 0) continue;
      if (!best) {
        best = r;
        continue;
      }
      int cmp = compare(r, *best, label, rhs);
      if (cmp == 0) {
        tied = true;
        if (lexicographic) {
          for (std::size_t s : slacks) {
            cmp = compare(r, *best, label, s);
            if (cmp != 0) break;
          }
        }
      }
      if (cmp < 0) best = r;
    }
    if (!best) throw Error("lemke_howson: unbounded pivot column; payoff shift failed");
    if (tied && !lexicographic) {
      std::string b;
      for (auto l : sorted_basis()) b += (b.empty() ? "" : ",") + std::to_string(l + 1);
      throw DegeneracyError("lemke_howson: tied minimum ratio entering label " + std::to_string(label + 1) +
                            " at basis {" + b + "}");
    }
    return *best;
  }

  int compare(std::size_t r1, std::size_t r2, std::size_t label, std::size_t col) const {
    const Rational a = t(r1, col) / t(r1, label), b = t(r2, col) / t(r2, label);
    return a < b ? -1 : (b < a ? 1 : 0);
  }

  std::vector<Rational> strategy(std::size_t first_label, std::size_t count) const {
    std::vector<Rational> v(count, Rational(0));
    Rational total = 0;
    for (std::size_t r = 0; r < t.rows; ++r) {
      if (basis[r] >= first_label && basis[r] < first_label + count) {
        v[basis[r] - first_label] = t(r, t.cols - 1);
        total += t(r, t.cols - 1);
      }
    }
    for (auto& p : v) p /= total;
    return v;
  }
};

inline Matrix shifted_positive(const Matrix& m) {
  const Rational low = *std::min_element(m.data.begin(), m.data.end());
  Matrix out = m;
  if (low <= 0) {
    for (auto& v : out.data) v += 1 - low;
  }
  return out;
}

}  // namespace detail

inline LemkeHowsonResult lemke_howson(const BimatrixGame& g, std::size_t dropped_label,
                                      const LemkeHowsonOptions& options = {}) {
  const std::size_t n1 = g.rows(), n2 = g.cols(), labels = n1 + n2;
  if (dropped_label >= labels) {
    throw ShapeError("dropped label " + std::to_string(dropped_label) + " outside 0.." + std::to_string(labels - 1));
  }
  const Matrix a = detail::shifted_positive(g.row_payoffs());
  const Matrix b = detail::shifted_positive(g.col_payoffs());

  detail::LhTableau p{Matrix(n2, labels + 1), {}, {}};
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) p.t(j, i) = b(i, j);
    p.t(j, n1 + j) = 1;
    p.t(j, labels) = 1;
    p.basis.push_back(n1 + j);
    p.slacks.push_back(n1 + j);
  }
  detail::LhTableau q{Matrix(n1, labels + 1), {}, {}};
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) q.t(i, n1 + j) = a(i, j);
    q.t(i, i) = 1;
    q.t(i, labels) = 1;
    q.basis.push_back(i);
    q.slacks.push_back(i);
  }

  LemkeHowsonResult result;
  auto snapshot = [&] {
    if (!options.record_path) return;
    auto v = p.sorted_basis();
    for (auto l : q.sorted_basis()) v.push_back(l + labels);
    result.path.push_back(std::move(v));
  };

  const std::uint64_t cap = labels >= 63 ? UINT64_MAX : std::uint64_t{1} << labels;
  bool in_p = dropped_label < n1;
  std::size_t entering = dropped_label;
  for (;;) {
    snapshot();
    if (result.pivots >= cap) throw BudgetExceeded("lemke_howson: pivot cap 2^(n1+n2) exceeded", result.pivots);
    detail::LhTableau& tab = in_p ? p : q;
    const std::size_t row = tab.ratio_test(entering, options.lexicographic);
    const std::size_t leaving = tab.basis[row];
    tab.pivot(row, entering);
    ++result.pivots;
    if (leaving == dropped_label) break;
    entering = leaving;
    in_p = !in_p;
  }
  snapshot();
  result.profile = MixedProfile{{p.strategy(0, n1), q.strategy(n1, n2)}};
  return result;
}

// ---------------------------------------------------------------------------
// Staged approximation for k players.

/// Maps each player's payoffs affinely onto [0, 1]; a player whose payoffs
/// are all equal gets all zeros.
inline NormalFormGame rescale_payoffs(const NormalFormGame& g) {
  const std::size_t k = g.players();
  std::vector<Rational> lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) lo[i] = hi[i] = g.payoff(i, std::uint64_t{0});
  for (std::uint64_t s = 0; s < g.profile_count(); ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = std::min(lo[i], g.payoff(i, s));
      hi[i] = std::max(hi[i], g.payoff(i, s));
    }
  }
  std::vector<Rational> out(g.payoffs().size());
  for (std::uint64_t s = 0; s < g.profile_count(); ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      out[s * k + i] = hi[i] == lo[i] ? Rational(0) : Rational((g.payoff(i, s) - lo[i]) / (hi[i] - lo[i]));
    }
  }
  return NormalFormGame(g.action_counts(), std::move(out));
}

struct ApproxResult {
  MixedProfile profile;
  Rational guarantee;  // 1 - 1/k, claimed on the rescaled game
  NormalFormGame rescaled;
};

/// Phase 1: player i (1-based, i < k) puts 1 - 1/(k+1-i) on a fixed action.
/// Phase 2: for i = k down to 1, player i puts its remaining mass on its
/// lowest-index best response to everything allocated so far (the phase-1
/// commitments of players below i and the finished strategies above i).
/// The fixed action is 0, or uniformly random per player when `seed` is set.
inline ApproxResult approx_nash(const NormalFormGame& g, std::optional<std::uint64_t> seed = std::nullopt) {
  NormalFormGame scaled = rescale_payoffs(g);
  const std::size_t k = scaled.players();
  std::vector<std::vector<Rational>> alloc;
  for (std::size_t i = 0; i < k; ++i) alloc.emplace_back(scaled.actions(i), Rational(0));
  std::optional<Rng> rng;
  if (seed) rng.emplace(*seed);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const std::size_t action = rng ? uniform_below(*rng, scaled.actions(i)) : 0;
    alloc[i][action] = 1 - Rational(1, k - i);
  }
  for (std::size_t i = k; i-- > 0;) {
    Rational committed = 0;
    for (const auto& p : alloc[i]) committed += p;
    const auto dev = deviation_payoffs_unchecked(scaled, alloc, i);
    const auto best = std::max_element(dev.begin(), dev.end()) - dev.begin();
    alloc[i][best] += 1 - committed;
  }
  return {MixedProfile{std::move(alloc)}, 1 - Rational(1, k), std::move(scaled)};
}

}  // namespace ppad
