#pragma once

#include <map>
#include <span>
#include <vector>

#include "msbc/linalg/dense_matrix.hpp"
#include "msbc/series/compose.hpp"

namespace msbc {

// Solves eqs(u, k) = 0 for the listed unknown variables u as series in the
// remaining variables k, by a chord iteration with the Jacobian frozen at the
// origin. Each sweep fixes at least one further degree, so the iteration
// stops at the exact fixed point of the truncated problem.
template <class C>
SeriesVector<C> solve_implicit_system(const SeriesVector<C>& eqs, std::span<const std::size_t> unknowns) {
  const std::size_t k = unknowns.size();
  if (eqs.size() != k) throw ReversionError("implicit solve: need as many equations as unknowns");
  if (k == 0) return eqs;
  for (const auto& e : eqs)
    if (!CoeffTraits<C>::is_zero(e.constant_term()))
      throw PreconditionError("implicit solve: equations must vanish at the origin");

  const auto vars = eqs.variables();
  const auto trunc = eqs.truncation();
  DenseMatrix<C> jac(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) jac(i, j) = eqs[i].coefficient(Monomial::unit(unknowns[j]));
  auto jinv = jac.inverse();
  if (!jinv) throw ReversionError("implicit solve: Jacobian with respect to the unknowns is singular");

  std::vector<TruncatedSeries<C>> u(k, TruncatedSeries<C>(vars, trunc));
  const int max_sweeps = trunc.order + trunc.param_order + 2;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    std::map<std::size_t, TruncatedSeries<C>> bind;
    for (std::size_t j = 0; j < k; ++j) bind.emplace(unknowns[j], u[j]);
    std::vector<TruncatedSeries<C>> res;
    for (const auto& e : eqs) res.push_back(substitute(e, bind));

    bool settled = true;
    for (std::size_t j = 0; j < k; ++j) {
      TruncatedSeries<C> delta(vars, trunc);
      for (std::size_t i = 0; i < k; ++i) delta += res[i] * (*jinv)(j, i);
      if (!delta.empty()) {
        if constexpr (CoeffTraits<C>::exact) {
          settled = false;
        } else {
          for (const auto& [m, c] : delta)
            if (std::fabs(c) > 1e-14) settled = false;
        }
      }
      u[j] -= delta;
    }
    if (settled) return SeriesVector<C>(std::move(u));
  }
  throw ReversionError("implicit solve: chord iteration did not settle");
}

}  // namespace msbc
