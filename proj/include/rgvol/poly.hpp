#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rgvol/rational.hpp"

namespace rgvol {

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are keyed by exponent vectors of fixed arity; zero coefficients are
// never stored.
class RationalPoly {
 public:
  using Exponents = std::vector<int>;

  RationalPoly() : arity_(0) {}
  explicit RationalPoly(int arity) : arity_(arity) {}

  static RationalPoly constant(int arity, const rational& c) {
    RationalPoly p(arity);
    if (c != 0) p.terms_[Exponents(arity, 0)] = c;
    return p;
  }
  static RationalPoly variable(int arity, int index, const rational& c = 1) {
    RationalPoly p(arity);
    Exponents e(arity, 0);
    e.at(index) = 1;
    if (c != 0) p.terms_[e] = c;
    return p;
  }

  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, rational>& terms() const { return terms_; }

  void add_term(const Exponents& e, const rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  RationalPoly& operator+=(const RationalPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  RationalPoly& operator-=(const RationalPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  RationalPoly& operator*=(const rational& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
  }
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const rational& c) { return a *= c; }

  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    RationalPoly r(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.arity_);
        for (int i = 0; i < a.arity_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  bool operator==(const RationalPoly& o) const {
    return arity_ == o.arity_ && terms_ == o.terms_;
  }

  rational eval(const std::vector<rational>& point) const {
    rational s = 0;
    for (const auto& [e, c] : terms_) {
      rational t = c;
      for (int i = 0; i < arity_; ++i)
        if (e[i]) t *= pow_rational(point[i], e[i]);
      s += t;
    }
    return s;
  }

  RationalPoly derivative(int var) const {
    RationalPoly r(arity_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      r.add_term(d, c * e[var]);
    }
    return r;
  }

  // Substitute variable i of *this by images[i]; all images share one arity.
  RationalPoly compose(const std::vector<RationalPoly>& images) const {
    int out_arity = images.empty() ? 0 : images[0].arity();
    RationalPoly r(out_arity);
    for (const auto& [e, c] : terms_) {
      RationalPoly t = RationalPoly::constant(out_arity, c);
      for (int i = 0; i < arity_; ++i)
        for (int k = 0; k < e[i]; ++k) t = t * images[i];
      r += t;
    }
    return r;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  bool is_homogeneous(int degree) const {
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      if (s != degree) return false;
    }
    return true;
  }

  bool is_symmetric() const {
    // invariance under adjacent transpositions generates the full group
    for (int i = 0; i + 1 < arity_; ++i) {
      for (const auto& [e, c] : terms_) {
        Exponents f = e;
        std::swap(f[i], f[i + 1]);
        auto it = terms_.find(f);
        if (it == terms_.end() || it->second != c) return false;
      }
    }
    return true;
  }

  // Set a variable to an explicit rational value, keeping the arity (the
  // substituted variable no longer occurs).
  RationalPoly substitute_value(int var, const rational& value) const {
    RationalPoly r(arity_);
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f[var] = 0;
      r.add_term(f, c * pow_rational(value, e[var]));
    }
    return r;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      rational a = c;
      if (first) {
        if (a < 0) { os << "-"; a = -a; }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      first = false;
      bool has_var = false;
      for (int i = 0; i < arity_; ++i) has_var |= e[i] > 0;
      if (a != 1 || !has_var) {
        os << numerator(a).str();
        if (denominator(a) != 1) os << "/" << denominator(a).str();
        if (has_var) os << "*";
      }
      bool fst = true;
      for (int i = 0; i < arity_; ++i) {
        if (e[i] == 0) continue;
        if (!fst) os << "*";
        fst = false;
        os << names[i];
        if (e[i] > 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

 private:
  int arity_;
  std::map<Exponents, rational> terms_;
};

}  // namespace rgvol
