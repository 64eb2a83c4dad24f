#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msbc/errors.hpp"
#include "msbc/series/coefficient.hpp"
#include "msbc/series/monomial.hpp"
#include "msbc/series/variables.hpp"

namespace msbc {

// Terms are kept when their state degree is <= order and their parameter
// degree is <= param_order.
struct Truncation {
  int order = 0;
  int param_order = 0;

  bool admits(const Monomial& m, const VariableSet& vars) const {
    return m.degree(vars, false) <= order && m.degree(vars, true) <= param_order;
  }
  bool operator==(const Truncation&) const = default;
};

template <class C>
class TruncatedSeries {
 public:
  using Coeff = C;
  using Terms = std::map<Monomial, C>;
  using Traits = CoeffTraits<C>;

  TruncatedSeries() = default;
  TruncatedSeries(VariablesPtr vars, Truncation trunc) : vars_(std::move(vars)), trunc_(trunc) {
    if (!vars_) throw StructuralError("series: null variable set");
  }

  static TruncatedSeries constant(VariablesPtr vars, Truncation trunc, const C& c) {
    TruncatedSeries s(std::move(vars), trunc);
    s.add_term(Monomial{}, c);
    return s;
  }
  static TruncatedSeries variable(VariablesPtr vars, Truncation trunc, std::size_t i) {
    if (i >= vars->size()) throw StructuralError("series: variable index out of range");
    TruncatedSeries s(std::move(vars), trunc);
    s.add_term(Monomial::unit(i), Traits::one());
    return s;
  }
  static TruncatedSeries variable(VariablesPtr vars, Truncation trunc, const std::string& name) {
    auto i = vars->index_of(name);
    return variable(std::move(vars), trunc, i);
  }

  const VariablesPtr& variables() const { return vars_; }
  const Truncation& truncation() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  int state_degree(const Monomial& m) const { return m.degree(*vars_, false); }
  int param_degree(const Monomial& m) const { return m.degree(*vars_, true); }
  bool admits(const Monomial& m) const { return trunc_.admits(m, *vars_); }

  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  // Terms outside the truncation are dropped silently; exact zeros are removed.
  void add_term(const Monomial& m, const C& c) {
    if (Traits::is_zero(c) || !admits(m)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }
  void set_term(const Monomial& m, const C& c) {
    terms_.erase(m);
    add_term(m, c);
  }
  void clear() { terms_.clear(); }

  // Lowest state degree present, or -1 for the zero series.
  int min_state_degree() const {
    int d = INT_MAX;
    for (const auto& [m, c] : terms_) d = std::min(d, state_degree(m));
    return terms_.empty() ? -1 : d;
  }
  int max_param_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, param_degree(m));
    return d;
  }
  C constant_term() const { return coefficient(Monomial{}); }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, C(-c));
    return *this;
  }
  TruncatedSeries& operator*=(const C& k) {
    if (Traits::is_zero(k)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= k;
    return *this;
  }
  TruncatedSeries operator-() const {
    TruncatedSeries r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const C& k) { return a *= k; }
  friend TruncatedSeries operator*(const C& k, TruncatedSeries a) { return a *= k; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_compatible(b);
    TruncatedSeries r(a.vars_, a.trunc_);
    const auto& vars = *a.vars_;
    std::vector<std::pair<int, int>> deg_b;
    deg_b.reserve(b.terms_.size());
    for (const auto& [m, c] : b.terms_) deg_b.emplace_back(m.degree(vars, false), m.degree(vars, true));
    for (const auto& [ma, ca] : a.terms_) {
      int sa = ma.degree(vars, false), pa = ma.degree(vars, true);
      std::size_t k = 0;
      for (const auto& [mb, cb] : b.terms_) {
        auto [sb, pb] = deg_b[k++];
        if (sa + sb > a.trunc_.order || pa + pb > a.trunc_.param_order) continue;
        C prod = ca * cb;
        r.add_term(ma * mb, prod);
      }
    }
    return r;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  TruncatedSeries derivative(std::size_t var) const {
    if (var >= vars_->size()) throw StructuralError("derivative: variable index out of range");
    TruncatedSeries r(vars_, trunc_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      C k = c * C(int(m[var]));
      r.add_term(m.lowered(var), k);
    }
    return r;
  }

  template <class Pred>
  TruncatedSeries filtered(Pred keep) const {
    TruncatedSeries r(vars_, trunc_);
    for (const auto& [m, c] : terms_)
      if (keep(m, c)) r.terms_.emplace(m, c);
    return r;
  }

  TruncatedSeries with_truncation(Truncation t) const {
    TruncatedSeries r(vars_, t);
    for (const auto& [m, c] : terms_) r.add_term(m, c);
    return r;
  }

  template <class D>
  TruncatedSeries<D> convert() const {
    TruncatedSeries<D> r(vars_, trunc_);
    for (const auto& [m, c] : terms_) r.add_term(m, convert_coeff<D>(c));
    return r;
  }

  // Direct sum of c * prod x_i^e_i.
  template <class D = C>
  D evaluate(std::span<const D> point) const {
    check_point(point.size());
    D sum = D(0);
    for (const auto& [m, c] : terms_) {
      D t = convert_coeff<D>(c);
      for (std::size_t i = 0; i < vars_->size(); ++i)
        for (int k = 0; k < m[i]; ++k) t *= point[i];
      sum += t;
    }
    return sum;
  }

  // Recursive Horner scheme over the lexicographic term order.
  template <class D = C>
  D evaluate_horner(std::span<const D> point) const {
    check_point(point.size());
    std::vector<std::pair<Monomial, D>> flat;
    flat.reserve(terms_.size());
    for (const auto& [m, c] : terms_) flat.emplace_back(m, convert_coeff<D>(c));
    return horner<D>(flat, 0, flat.size(), 0, point);
  }

  bool operator==(const TruncatedSeries& o) const {
    return same_variables(vars_, o.vars_) && terms_ == o.terms_;
  }

  void check_compatible(const TruncatedSeries& o) const {
    if (!same_variables(vars_, o.vars_)) throw StructuralError("series: mismatched variable sets");
    if (!(trunc_ == o.trunc_)) throw StructuralError("series: mismatched truncations");
  }

 private:
  template <class D>
  static D convert_coeff(const C& c) {
    if constexpr (std::is_same_v<C, D>) {
      return c;
    } else if constexpr (std::is_same_v<C, Rational> && std::is_same_v<D, double>) {
      return c.get_d();
    } else {
      return D(c);
    }
  }

  void check_point(std::size_t n) const {
    if (n != vars_->size()) throw StructuralError("evaluate: point has wrong dimension");
  }

  template <class D>
  D horner(const std::vector<std::pair<Monomial, D>>& t, std::size_t lo, std::size_t hi, std::size_t var,
           std::span<const D> x) const {
    if (lo == hi) return D(0);
    if (var == vars_->size()) return t[lo].second;  // a single monomial remains
    D acc = D(0);
    int prev = -1;
    // Groups are ascending in the exponent of var; fold from the top down.
    std::vector<std::pair<int, D>> groups;
    for (std::size_t i = lo; i < hi;) {
      std::size_t j = i;
      while (j < hi && t[j].first[var] == t[i].first[var]) ++j;
      groups.emplace_back(t[i].first[var], horner<D>(t, i, j, var + 1, x));
      i = j;
    }
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
      if (prev >= 0)
        for (int k = it->first; k < prev; ++k) acc *= x[var];
      acc += it->second;
      prev = it->first;
    }
    for (int k = 0; k < prev; ++k) acc *= x[var];
    return acc;
  }

  VariablesPtr vars_;
  Truncation trunc_{};
  Terms terms_;
};

// Fixed-length tuple of series sharing one variable set and truncation.
template <class C>
class SeriesVector {
 public:
  SeriesVector() = default;
  explicit SeriesVector(std::vector<TruncatedSeries<C>> comps) : comps_(std::move(comps)) {
    for (std::size_t i = 1; i < comps_.size(); ++i) comps_[0].check_compatible(comps_[i]);
  }
  SeriesVector(VariablesPtr vars, Truncation trunc, std::size_t n)
      : comps_(n, TruncatedSeries<C>(std::move(vars), trunc)) {}

  std::size_t size() const { return comps_.size(); }
  TruncatedSeries<C>& operator[](std::size_t i) { return comps_[i]; }
  const TruncatedSeries<C>& operator[](std::size_t i) const { return comps_[i]; }
  auto begin() const { return comps_.begin(); }
  auto end() const { return comps_.end(); }
  const std::vector<TruncatedSeries<C>>& components() const { return comps_; }
  const VariablesPtr& variables() const { return comps_.at(0).variables(); }
  const Truncation& truncation() const { return comps_.at(0).truncation(); }

  template <class D>
  SeriesVector<D> convert() const {
    std::vector<TruncatedSeries<D>> out;
    for (const auto& s : comps_) out.push_back(s.template convert<D>());
    return SeriesVector<D>(std::move(out));
  }

  bool operator==(const SeriesVector&) const = default;

 private:
  std::vector<TruncatedSeries<C>> comps_;
};

}  // namespace msbc
