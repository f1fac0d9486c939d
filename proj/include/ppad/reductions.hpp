#pragma once

// Symmetric-game reduction with equilibrium recovery, and the example games.

#include <algorithm>
#include <string>
#include <vector>

#include "ppad/error.hpp"
#include "ppad/games.hpp"
#include "ppad/rational.hpp"

namespace ppad {

struct SymmetrizationCertificate {
  Rational shift;     // added to every payoff of the source game
  std::size_t n = 0;  // source game is n x n; the symmetric game is 2n x 2n
};

/// The 2n x 2n game R' = [[0, R~], [C~^T, 0]], C' = [[0, C~], [R~^T, 0]]
/// where R~, C~ are the payoffs shifted to be strictly positive. R' = C'^T.
inline std::pair<BimatrixGame, SymmetrizationCertificate> symmetrize(const BimatrixGame& g) {
  if (g.rows() != g.cols()) {
    throw ShapeError("symmetrize needs a square game, got " + std::to_string(g.rows()) + "x" +
                     std::to_string(g.cols()));
  }
  const std::size_t n = g.rows();
  Rational low = 0;
  for (const auto& v : g.row_payoffs().data) low = std::min(low, v);
  for (const auto& v : g.col_payoffs().data) low = std::min(low, v);
  const Rational shift = 1 - low;

  Matrix r(2 * n, 2 * n), c(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational rs = g.row_payoffs()(i, j) + shift, cs = g.col_payoffs()(i, j) + shift;
      r(i, n + j) = rs;
      c(i, n + j) = cs;
      r(n + j, i) = cs;
      c(n + j, i) = rs;
    }
  }
  return {BimatrixGame(std::move(r), std::move(c)), SymmetrizationCertificate{shift, n}};
}

enum class Orientation {
  RowFirstHalf,     // p > 0 and 1 - q > 0: player 1's first half plays the row role
  ColumnFirstHalf,  // 1 - p > 0 and q > 0: player 2's first half plays the row role
};

inline const char* to_string(Orientation o) {
  return o == Orientation::RowFirstHalf ? "row-first-half" : "column-first-half";
}

struct RecoveredEquilibrium {
  MixedProfile profile;
  Orientation orientation;
};

/// Rescales the halves of an equilibrium of the symmetric game into an
/// equilibrium of the source game. The input must verify exactly.
inline RecoveredEquilibrium recover_equilibrium(const BimatrixGame& g, const SymmetrizationCertificate& cert,
                                                const MixedProfile& sym_profile) {
  const std::size_t n = cert.n;
  if (g.rows() != n || g.cols() != n) throw ShapeError("certificate does not match the source game");
  auto [sym, unused] = symmetrize(g);
  (void)unused;
  if (!verify_nash(sym.to_normal_form(), sym_profile, 0).accepted) {
    throw ValidityError("profile is not an equilibrium of the symmetric game");
  }
  const auto& a = sym_profile[0];
  const auto& b = sym_profile[1];
  Rational p = 0, q = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p += a[i];
    q += b[i];
  }
  auto part = [n](const std::vector<Rational>& v, std::size_t from, const Rational& mass) {
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[from + i] / mass;
    return out;
  };
  if (p > 0 && 1 - q > 0) {
    return {MixedProfile{{part(a, 0, p), part(b, n, 1 - q)}}, Orientation::RowFirstHalf};
  }
  if (1 - p > 0 && q > 0) {
    return {MixedProfile{{part(b, 0, q), part(a, n, 1 - p)}}, Orientation::ColumnFirstHalf};
  }
  throw Error("recover_equilibrium: both halves degenerate (p=" + format_rational(p) + ", q=" + format_rational(q) +
              "); no equilibrium of the symmetric game has this shape");
}

// ---------------------------------------------------------------------------
// Example games.

inline BimatrixGame fixture_rps() {
  Matrix r(3, 3, {0, -1, 1, 1, 0, -1, -1, 1, 0});
  Matrix c(3, 3, {0, 1, -1, -1, 0, 1, 1, -1, 0});
  return BimatrixGame(std::move(r), std::move(c));
}

inline BimatrixGame fixture_stag_hunt() {
  return BimatrixGame(Matrix(2, 2, {8, 0, 1, 1}), Matrix(2, 2, {8, 1, 0, 1}));
}

/// Generalised matching pennies: (1, -1) on the diagonal, (0, 0) elsewhere.
inline BimatrixGame fixture_gmp(std::size_t n) {
  if (n < 2) throw ShapeError("generalised matching pennies needs n >= 2");
  Matrix r(n, n), c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = 1;
    c(i, i) = -1;
  }
  return BimatrixGame(std::move(r), std::move(c));
}

/// The classic version: the loser pays one unit to the winner.
inline BimatrixGame fixture_matching_pennies() {
  return BimatrixGame(Matrix(2, 2, {1, -1, -1, 1}), Matrix(2, 2, {-1, 1, 1, -1}));
}

}  // namespace ppad
