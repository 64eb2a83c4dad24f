#include "msbc/pde/kernels.hpp"

namespace msbc {
namespace {

inline void micro_node(const MicroCoefficients& k, double inv2dx, double invdx2, int i, const double* a,
                       const double* b, double* dy) {
  const double ai = a[i], bi = b[i];
  const double ax = (a[i + 1] - a[i - 1]) * inv2dx, bx = (b[i + 1] - b[i - 1]) * inv2dx;
  const double axx = (a[i + 1] - 2.0 * ai + a[i - 1]) * invdx2, bxx = (b[i + 1] - 2.0 * bi + b[i - 1]) * invdx2;
  dy[2 * (i - 1)] = k.exchange * (bi - ai) + k.reaction * ai * ai - k.advection * ax + k.diffusion * axx;
  dy[2 * (i - 1) + 1] = k.exchange * (ai - bi) - k.reaction * bi * bi + k.advection * bx + k.diffusion * bxx;
}

inline void macro_node(double inv2dx, double invdx2, int i, const double* C, const double* source, double* dC) {
  const double c = C[i];
  const double cx = (C[i + 1] - C[i - 1]) * inv2dx, cxx = (C[i + 1] - 2.0 * c + C[i - 1]) * invdx2;
  double r = 0.5 * c * c * c - 2.0 * c * cx + 4.0 * cxx;
  if (source) r += source[i];
  dC[i - 1] = r;
}

}  // namespace

void micro_rhs_serial(const MicroCoefficients& k, double dx, int n, const double* a, const double* b, double* dy) {
  const double inv2dx = 0.5 / dx, invdx2 = 1.0 / (dx * dx);
  for (int i = 1; i < n; ++i) micro_node(k, inv2dx, invdx2, i, a, b, dy);
}

void micro_rhs_parallel(const MicroCoefficients& k, double dx, int n, const double* a, const double* b, double* dy) {
  const double inv2dx = 0.5 / dx, invdx2 = 1.0 / (dx * dx);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (int i = 1; i < n; ++i) micro_node(k, inv2dx, invdx2, i, a, b, dy);
}

void macro_rhs_serial(double dx, int n, const double* C, const double* source, double* dC) {
  const double inv2dx = 0.5 / dx, invdx2 = 1.0 / (dx * dx);
  for (int i = 1; i < n; ++i) macro_node(inv2dx, invdx2, i, C, source, dC);
}

void macro_rhs_parallel(double dx, int n, const double* C, const double* source, double* dC) {
  const double inv2dx = 0.5 / dx, invdx2 = 1.0 / (dx * dx);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (int i = 1; i < n; ++i) macro_node(inv2dx, invdx2, i, C, source, dC);
}

}  // namespace msbc
