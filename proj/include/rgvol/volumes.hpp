#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rgvol/linalg.hpp"
#include "rgvol/poly.hpp"
#include "rgvol/rational.hpp"

namespace rgvol {

struct VolumeError : std::runtime_error {
  std::string code;
  VolumeError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

struct BoundaryPoint {
  std::vector<rational> L_plus, L_minus;
};

// Exact evaluators for the moduli volumes of oriented 4-valent metric ribbon
// graphs: the symbolic one-negative-boundary polynomials F_{g,n} and the
// pointwise volumes Z_{g,n+,n-}. Both follow the pant-removal recursion; all
// arithmetic is rational.
class VolumeEngine {
 public:
  // ----- symbolic, one negative boundary -----
  static bool f_stable(int g, int n) { return g >= 0 && n >= 1 && 2 * g + n >= 2; }

  const RationalPoly& f_polynomial(int g, int n) {
    if (!f_stable(g, n)) throw VolumeError("UnstableType", "F requires 2g+n >= 2");
    auto key = std::make_pair(g, n);
    auto it = fmemo_.find(key);
    if (it != fmemo_.end()) return it->second;

    RationalPoly acc(n);
    if (g == 0 && n == 2) {
      acc = RationalPoly::constant(2, 1);
    } else {
      // remove a pant carrying two positive boundaries
      if (f_stable(g, n - 1)) {
        const RationalPoly& sub = f_polynomial(g, n - 1);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            RationalPoly merged =
                RationalPoly::variable(n, i) + RationalPoly::variable(n, j);
            std::vector<RationalPoly> images;
            images.push_back(merged);
            for (int k = 0; k < n; ++k)
              if (k != i && k != j) images.push_back(RationalPoly::variable(n, k));
            acc += merged * sub.compose(images) * rational(1, 2);
          }
      }
      // remove a non-separating pant with one positive boundary
      if (g >= 1 && f_stable(g - 1, n + 1)) {
        const RationalPoly& sub = f_polynomial(g - 1, n + 1);
        for (int i = 0; i < n; ++i) {
          // work in arity n+1; the last variable is the cut position x
          RationalPoly X = RationalPoly::variable(n + 1, n);
          RationalPoly Li = RationalPoly::variable(n + 1, i);
          std::vector<RationalPoly> images = {X, Li - X};
          for (int k = 0; k < n; ++k)
            if (k != i) images.push_back(RationalPoly::variable(n + 1, k));
          RationalPoly inner = sub.compose(images) * X * (Li - X);
          for (const auto& [e, c] : inner.terms()) {
            int k = e[n];
            RationalPoly::Exponents out(e.begin(), e.end() - 1);
            out[i] += k + 1;
            acc.add_term(out, c / (k + 1) / 2);
          }
        }
      }
      acc *= rational(1, 2 * g - 1 + n);
    }
    if (!acc.is_homogeneous(4 * g - 2 + n) || !acc.is_symmetric())
      throw std::logic_error("volume polynomial lost homogeneity or symmetry");
    return fmemo_.emplace(key, std::move(acc)).first->second;
  }

  // ----- pointwise, general type -----
  static bool z_stable(int g, int np, int nm) {
    return g >= 0 && np >= 1 && nm >= 1 && 2 * g - 2 + np + nm > 0;
  }

  rational z_evaluate(int g, int np, int nm, const std::vector<rational>& Lp,
                      const std::vector<rational>& Lm) {
    if (!z_stable(g, np, nm)) throw VolumeError("UnstableType", "unstable directed type");
    if (static_cast<int>(Lp.size()) != np || static_cast<int>(Lm.size()) != nm)
      throw VolumeError("UnstableType", "boundary count mismatch");
    rational res = 0;
    for (const auto& l : Lp) res += l;
    for (const auto& l : Lm) res -= l;
    if (res != 0) throw VolumeError("ResidueViolation", "signed lengths must cancel");
    return z_rec(g, np, nm, Lp, Lm);
  }

  // ----- coefficients of F -----
  rational coefficient(int g, std::vector<int> alpha) {
    std::sort(alpha.begin(), alpha.end());
    const int n = static_cast<int>(alpha.size());
    if (!f_stable(g, n)) return 0;
    long total = 0;
    for (int a : alpha) {
      if (a < 0) return 0;
      total += a;
    }
    if (total != 4 * g - 2 + n) return 0;
    auto key = std::make_pair(g, alpha);
    auto it = cmemo_.find(key);
    if (it != cmemo_.end()) return it->second;
    rational val;
    if (g == 0 && n == 2) {
      val = 1;  // F_{0,2} = 1
    } else {
      rational acc = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          std::vector<int> rest;
          for (int k = 0; k < n; ++k)
            if (k != i && k != j) rest.push_back(alpha[k]);
          rest.push_back(alpha[i] + alpha[j] - 1);
          acc += rational(binomial(alpha[i] + alpha[j], alpha[i])) *
                 coefficient(g, rest) / 2;
        }
        for (int x1 = 0; x1 <= alpha[i] - 3; ++x1) {
          int x2 = alpha[i] - 3 - x1;
          std::vector<int> rest;
          for (int k = 0; k < n; ++k)
            if (k != i) rest.push_back(alpha[k]);
          rest.push_back(x1);
          rest.push_back(x2);
          acc += rational(factorial(x1 + 1) * factorial(x2 + 1), factorial(alpha[i])) *
                 coefficient(g - 1, rest) / 2;
        }
      }
      val = acc / (2 * g - 1 + n);
    }
    return cmemo_.emplace(key, val).first->second;
  }

  // All coefficients of F_{g,n}, cross-checked against the polynomial.
  std::map<std::vector<int>, rational> coefficient_table(int g, int n) {
    std::map<std::vector<int>, rational> out;
    const RationalPoly& f = f_polynomial(g, n);
    std::vector<int> alpha(n, 0);
    int degree = 4 * g - 2 + n;
    std::function<void(int, int)> gen = [&](int pos, int rem) {
      if (pos == n - 1) {
        alpha[pos] = rem;
        std::vector<int> sorted = alpha;
        std::sort(sorted.begin(), sorted.end());
        if (out.count(sorted)) return;
        rational c = coefficient(g, sorted);
        auto it = f.terms().find(sorted);
        rational from_poly = it == f.terms().end() ? rational(0) : it->second;
        if (c != from_poly)
          throw std::logic_error("coefficient recursion disagrees with the polynomial");
        out.emplace(std::move(sorted), c);
        return;
      }
      for (int v = 0; v <= rem; ++v) {
        alpha[pos] = v;
        gen(pos + 1, rem - v);
      }
    };
    gen(0, degree);
    return out;
  }

 private:
  rational z_or_zero(int g, int np, int nm, std::vector<rational> Lp,
                     std::vector<rational> Lm) {
    if (!z_stable(g, np, nm)) return 0;
    return z_rec(g, np, nm, std::move(Lp), std::move(Lm));
  }

  rational z_rec(int g, int np, int nm, std::vector<rational> Lp, std::vector<rational> Lm) {
    if (g == 0 && np + nm == 3) return 1;  // oriented pants carry one graph
    auto key = std::make_tuple(g, np, nm, Lp, Lm);
    auto it = zmemo_.find(key);
    if (it != zmemo_.end()) return it->second;
    rational acc = 0;

    // pant with a positive and a negative boundary
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < nm; ++j) {
        rational v = Lp[i] - Lm[j];
        if (v <= 0) continue;
        std::vector<rational> lp = {v};
        for (int k = 0; k < np; ++k)
          if (k != i) lp.push_back(Lp[k]);
        std::vector<rational> lm;
        for (int k = 0; k < nm; ++k)
          if (k != j) lm.push_back(Lm[k]);
        acc += v * z_or_zero(g, np, nm - 1, std::move(lp), std::move(lm));
      }

    // pant with two positive boundaries
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) {
        if (i == j) continue;
        rational v = Lp[i] + Lp[j];
        std::vector<rational> lp = {v};
        for (int k = 0; k < np; ++k)
          if (k != i && k != j) lp.push_back(Lp[k]);
        acc += v * z_or_zero(g, np - 1, nm, std::move(lp), Lm) / 2;
      }

    // non-separating pant, genus drop
    if (g >= 1)
      for (int i = 0; i < np; ++i) {
        std::vector<rational> rest;
        for (int k = 0; k < np; ++k)
          if (k != i) rest.push_back(Lp[k]);
        acc += integral_term(g, np, nm, i, Lp, Lm, rest) / 2;
      }

    // separating pant
    for (int i = 0; i < np; ++i) {
      std::vector<rational> rest;
      std::vector<int> sign;  // +1 positive, -1 negative
      for (int k = 0; k < np; ++k)
        if (k != i) {
          rest.push_back(Lp[k]);
          sign.push_back(+1);
        }
      for (int k = 0; k < nm; ++k) {
        rest.push_back(Lm[k]);
        sign.push_back(-1);
      }
      const int r = static_cast<int>(rest.size());
      for (long mask = 0; mask < (1L << r); ++mask) {
        for (int g1 = 0; g1 <= g; ++g1) {
          int g2 = g - g1;
          std::vector<rational> p1, m1, p2, m2;
          rational x1 = 0, x2 = 0;
          for (int k = 0; k < r; ++k) {
            bool first = (mask >> k) & 1;
            if (sign[k] > 0) {
              (first ? p1 : p2).push_back(rest[k]);
              (first ? x1 : x2) -= rest[k];
            } else {
              (first ? m1 : m2).push_back(rest[k]);
              (first ? x1 : x2) += rest[k];
            }
          }
          if (x1 <= 0 || x2 <= 0) continue;
          int np1 = static_cast<int>(p1.size()) + 1, nm1 = static_cast<int>(m1.size());
          int np2 = static_cast<int>(p2.size()) + 1, nm2 = static_cast<int>(m2.size());
          if (!z_stable(g1, np1, nm1) || !z_stable(g2, np2, nm2)) continue;
          p1.insert(p1.begin(), x1);
          p2.insert(p2.begin(), x2);
          acc += x1 * x2 * z_rec(g1, np1, nm1, std::move(p1), std::move(m1)) *
                 z_rec(g2, np2, nm2, std::move(p2), std::move(m2)) / 2;
        }
      }
    }

    acc /= 2 * g - 2 + np + nm;
    return zmemo_.emplace(std::move(key), acc).first->second;
  }

  // Exact integral of Z_{g-1,np+1,nm}(x, L_i - x, ...) x (L_i - x) over
  // (0, L_i). The integrand is piecewise polynomial; candidate walls are the
  // signed subset sums of the remaining boundaries (and their reflections and
  // halves), and every piece is interpolated and then verified at two extra
  // sample points, bisecting on any mismatch.
  rational integral_term(int g, int np, int nm, int i, const std::vector<rational>& Lp,
                         const std::vector<rational>& Lm, const std::vector<rational>& rest) {
    const rational L = Lp[i];
    if (L <= 0) return 0;
    const int degree = 4 * g - 4 + np + nm;
    std::set<rational> sums = {rational(0)};
    {
      std::vector<rational> signed_vals;
      for (const auto& v : rest) signed_vals.push_back(v);
      for (const auto& v : Lm) signed_vals.push_back(-v);
      for (const auto& v : signed_vals) {
        std::set<rational> next = sums;
        for (const auto& s : sums) next.insert(s + v);
        sums = std::move(next);
      }
    }
    std::set<rational> walls;
    auto add_wall = [&](const rational& w) {
      if (w > 0 && w < L) walls.insert(w);
    };
    for (const auto& s : sums) {
      add_wall(s);
      add_wall(-s);
      add_wall(L - s);
      add_wall(L + s);
      add_wall(s / 2);
      add_wall(-s / 2);
      add_wall((L - s) / 2);
      add_wall((L + s) / 2);
    }
    auto integrand = [&](const rational& x) {
      std::vector<rational> lp = {x, L - x};
      for (const auto& v : rest) lp.push_back(v);
      return z_or_zero(g - 1, np + 1, nm, std::move(lp), Lm) * x * (L - x);
    };
    rational total = 0;
    rational a = 0;
    std::vector<rational> cuts(walls.begin(), walls.end());
    cuts.push_back(L);
    for (const auto& b : cuts) {
      total += integrate_piece(integrand, a, b, degree, 0);
      a = b;
    }
    return total;
  }

  template <typename F>
  rational integrate_piece(const F& f, const rational& a, const rational& b, int degree,
                           int depth) {
    if (a >= b) return 0;
    const int samples = degree + 3;
    QVec xs, ys;
    for (int k = 0; k < samples; ++k) {
      rational x = a + (b - a) * rational(k + 1, samples + 1);
      xs.push_back(x);
      ys.push_back(f(x));
    }
    QVec fit_x(xs.begin(), xs.begin() + degree + 1), fit_y(ys.begin(), ys.begin() + degree + 1);
    QVec coeff = interpolate(fit_x, fit_y);
    bool ok = true;
    for (int k = degree + 1; k < samples && ok; ++k) ok = eval_poly(coeff, xs[k]) == ys[k];
    if (!ok) {
      if (depth > 40)
        throw std::logic_error("piecewise structure of the volume integrand did not settle");
      rational mid = (a + b) / 2;
      return integrate_piece(f, a, mid, degree, depth + 1) +
             integrate_piece(f, mid, b, degree, depth + 1);
    }
    rational total = 0;
    for (size_t k = 0; k < coeff.size(); ++k)
      total += coeff[k] * (pow_rational(b, static_cast<long>(k) + 1) -
                           pow_rational(a, static_cast<long>(k) + 1)) /
               rational(static_cast<long>(k) + 1);
    return total;
  }

  std::map<std::pair<int, int>, RationalPoly> fmemo_;
  std::map<std::pair<int, std::vector<int>>, rational> cmemo_;
  std::map<std::tuple<int, int, int, std::vector<rational>, std::vector<rational>>, rational>
      zmemo_;
};

}  // namespace rgvol
