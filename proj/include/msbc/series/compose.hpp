#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "msbc/series/truncated_series.hpp"

namespace msbc {

// p(r_0, ..., r_{n-1}) where r_i replaces variable i of p. All replacements
// share the target variable set and truncation. A replacement with a non-zero
// constant term for a variable that p actually uses would mix truncated and
// untruncated degrees, so it is rejected.
template <class C>
TruncatedSeries<C> compose(const TruncatedSeries<C>& p, std::span<const TruncatedSeries<C>> repl) {
  const auto& vars = *p.variables();
  if (repl.size() != vars.size()) throw StructuralError("compose: one replacement per variable required");
  for (std::size_t i = 1; i < repl.size(); ++i) repl[0].check_compatible(repl[i]);

  std::vector<int> max_exp(vars.size(), 0);
  for (const auto& [m, c] : p)
    for (std::size_t i = 0; i < vars.size(); ++i) max_exp[i] = std::max<int>(max_exp[i], m[i]);
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (max_exp[i] > 0 && !CoeffTraits<C>::is_zero(repl[i].constant_term()))
      throw PreconditionError("compose: replacement for " + vars.name(i) + " has a non-zero constant term");

  const auto& target = repl[0];
  std::vector<std::vector<TruncatedSeries<C>>> powers(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    powers[i].push_back(TruncatedSeries<C>::constant(target.variables(), target.truncation(), CoeffTraits<C>::one()));
    for (int k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * repl[i]);
  }

  TruncatedSeries<C> out(target.variables(), target.truncation());
  for (const auto& [m, c] : p) {
    auto term = TruncatedSeries<C>::constant(target.variables(), target.truncation(), c);
    for (std::size_t i = 0; i < vars.size() && !term.empty(); ++i)
      if (m[i] > 0) term = term * powers[i][m[i]];
    out += term;
  }
  return out;
}

template <class C>
SeriesVector<C> compose(const SeriesVector<C>& p, std::span<const TruncatedSeries<C>> repl) {
  std::vector<TruncatedSeries<C>> out;
  for (const auto& s : p) out.push_back(compose(s, repl));
  return SeriesVector<C>(std::move(out));
}

// Replace the listed variables; every other variable maps to itself.
template <class C>
TruncatedSeries<C> substitute(const TruncatedSeries<C>& p, const std::map<std::size_t, TruncatedSeries<C>>& bindings) {
  std::vector<TruncatedSeries<C>> repl;
  for (std::size_t i = 0; i < p.variables()->size(); ++i) {
    auto it = bindings.find(i);
    repl.push_back(it != bindings.end() ? it->second
                                        : TruncatedSeries<C>::variable(p.variables(), p.truncation(), i));
  }
  return compose(p, std::span<const TruncatedSeries<C>>(repl));
}

// Sets a variable to a number. Only exact when the series is complete in that
// variable, which the caller must know (e.g. a terminated parameter series).
template <class C>
TruncatedSeries<C> fix_variable(const TruncatedSeries<C>& p, std::size_t var, const C& value) {
  TruncatedSeries<C> out(p.variables(), p.truncation());
  for (const auto& [m, c] : p) {
    C k = c;
    for (int e = 0; e < m[var]; ++e) k *= value;
    Monomial mm = m;
    mm.set(var, 0);
    out.add_term(mm, k);
  }
  return out;
}

template <class C>
SeriesVector<C> fix_variable(const SeriesVector<C>& p, std::size_t var, const C& value) {
  std::vector<TruncatedSeries<C>> out;
  for (const auto& s : p) out.push_back(fix_variable(s, var, value));
  return SeriesVector<C>(std::move(out));
}

// Moves a series into another variable set. source_to_target[i] gives the
// target index of source variable i, or nullopt when the variable must not
// occur in p.
template <class C>
TruncatedSeries<C> remap(const TruncatedSeries<C>& p, VariablesPtr target, Truncation trunc,
                         std::span<const std::optional<std::size_t>> source_to_target) {
  const auto& vars = *p.variables();
  if (source_to_target.size() != vars.size()) throw StructuralError("remap: mapping has wrong length");
  TruncatedSeries<C> out(target, trunc);
  for (const auto& [m, c] : p) {
    Monomial mm;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (m[i] == 0) continue;
      if (!source_to_target[i])
        throw StructuralError("remap: variable " + vars.name(i) + " has no image in the target set");
      mm.set(*source_to_target[i], mm[*source_to_target[i]] + m[i]);
    }
    out.add_term(mm, c);
  }
  return out;
}

// Name-based remap: each source variable maps to the target variable of the
// same name when present.
template <class C>
TruncatedSeries<C> remap_by_name(const TruncatedSeries<C>& p, VariablesPtr target, Truncation trunc) {
  std::vector<std::optional<std::size_t>> map;
  for (const auto& n : p.variables()->names())
    map.push_back(target->contains(n) ? std::optional<std::size_t>(target->index_of(n)) : std::nullopt);
  return remap(p, target, trunc, std::span<const std::optional<std::size_t>>(map));
}

}  // namespace msbc
