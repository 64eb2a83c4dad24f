#include "msbc/pde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "msbc/errors.hpp"

namespace msbc {
namespace {

std::vector<double> slope(const std::vector<double>& C, double dx) {
  const std::size_t n = C.size() - 1;
  std::vector<double> cx(C.size());
  for (std::size_t i = 1; i < n; ++i) cx[i] = (C[i + 1] - C[i - 1]) / (2 * dx);
  cx[0] = (-3 * C[0] + 4 * C[1] - C[2]) / (2 * dx);
  cx[n] = (3 * C[n] - 4 * C[n - 1] + C[n - 2]) / (2 * dx);
  return cx;
}

// Node indices inside [lo, hi], with a relative guard against rounding in x_i.
std::pair<int, int> window_nodes(const Grid1D& g, Window w) {
  const double eps = 1e-9 * g.dx();
  int first = std::max(0, int(std::ceil((w.lo - eps) / g.dx())));
  int last = std::min(g.n, int(std::floor((w.hi + eps) / g.dx())));
  if (!(w.lo <= w.hi) || first > last) throw ValidationError("interior_error: empty window");
  return {first, last};
}

void check_pair(const MicroState& m, const MacroState& c) {
  if (m.grid.n != c.grid.n || m.grid.L != c.grid.L) throw StructuralError("interior_error: different grids");
  if (m.t != c.t) throw StructuralError("interior_error: different times");
  if (m.a.size() != m.grid.nodes() || c.C.size() != c.grid.nodes())
    throw StructuralError("interior_error: arrays do not match the grid");
}

}  // namespace

MicroState reconstruct_micro(const MacroState& macro) {
  const auto& C = macro.C;
  if (C.size() < 3) throw StructuralError("reconstruct_micro: too few nodes");
  auto cx = slope(C, macro.grid.dx());
  MicroState m{macro.t, macro.grid, std::vector<double>(C.size()), std::vector<double>(C.size())};
  for (std::size_t i = 0; i < C.size(); ++i) {
    const double half_sq = 0.5 * C[i] * C[i];
    m.a[i] = C[i] + half_sq - cx[i];
    m.b[i] = C[i] - half_sq + cx[i];
  }
  return m;
}

ErrorMetrics interior_error(const MicroState& micro, const MacroState& macro, Window w) {
  check_pair(micro, macro);
  auto [first, last] = window_nodes(macro.grid, w);
  auto rec = reconstruct_micro(macro);
  ErrorMetrics e;
  double sum = 0.0;
  for (int i = first; i <= last; ++i) {
    const double d = std::fabs(macro.C[i] - 0.5 * (micro.a[i] + micro.b[i]));
    e.linf_mean = std::max(e.linf_mean, d);
    sum += d * d;
    e.linf_fields = std::max({e.linf_fields, std::fabs(rec.a[i] - micro.a[i]), std::fabs(rec.b[i] - micro.b[i])});
  }
  e.l2_mean = std::sqrt(sum * macro.grid.dx());
  return e;
}

ErrorMetrics interior_error_sorted(const MicroState& micro, const MacroState& macro, Window w) {
  check_pair(micro, macro);
  auto [first, last] = window_nodes(macro.grid, w);
  auto rec = reconstruct_micro(macro);
  std::vector<double> mean, fields;
  for (int i = first; i <= last; ++i) {
    mean.push_back(std::fabs(macro.C[i] - 0.5 * (micro.a[i] + micro.b[i])));
    fields.push_back(std::fabs(rec.a[i] - micro.a[i]));
    fields.push_back(std::fabs(rec.b[i] - micro.b[i]));
  }
  std::sort(mean.begin(), mean.end());
  std::sort(fields.begin(), fields.end());
  ErrorMetrics e;
  e.linf_mean = mean.back();
  e.linf_fields = fields.back();
  double sum = 0.0;
  for (double d : mean) sum += d * d;  // ascending order keeps small terms from being swamped
  e.l2_mean = std::sqrt(sum * macro.grid.dx());
  return e;
}

void write_csv_header(std::ostream& os) { os << "t,x,field,value\n"; }

void write_csv(std::ostream& os, const MicroState& s) {
  for (const auto* f : {&s.a, &s.b})
    for (int i = 0; i <= s.grid.n; ++i)
      fmt::print(os, "{:.12g},{:.12g},{},{:.12g}\n", s.t, s.grid.x(i), f == &s.a ? "a" : "b", (*f)[i]);
}

void write_csv(std::ostream& os, const MacroState& s) {
  for (int i = 0; i <= s.grid.n; ++i) fmt::print(os, "{:.12g},{:.12g},C,{:.12g}\n", s.t, s.grid.x(i), s.C[i]);
}

}  // namespace msbc
