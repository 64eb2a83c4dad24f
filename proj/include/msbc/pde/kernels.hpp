#pragma once

namespace msbc {

enum class Execution { serial, parallel };

// a_t = k (b - a) + r a^2 - v a_x + D a_xx
// b_t = k (a - b) - r b^2 + v b_x + D b_xx
struct MicroCoefficients {
  double exchange = 0.5;
  double reaction = 0.5;
  double advection = 1.0;
  double diffusion = 3.0;
};

// Below this many intervals the parallel kernels run on one thread.
inline constexpr int kParallelThreshold = 256;

// a, b hold all n+1 nodes; dy receives the interleaved interior derivative
// (a_1, b_1, ..., a_{n-1}, b_{n-1}). Pointwise, so both versions agree bitwise.
void micro_rhs_serial(const MicroCoefficients& k, double dx, int n, const double* a, const double* b, double* dy);
void micro_rhs_parallel(const MicroCoefficients& k, double dx, int n, const double* a, const double* b, double* dy);

// C holds all n+1 nodes, source the n+1 nodal source values (may be null);
// dC receives the n-1 interior derivatives of C_t = C^3/2 - 2 C C_x + 4 C_xx.
void macro_rhs_serial(double dx, int n, const double* C, const double* source, double* dC);
void macro_rhs_parallel(double dx, int n, const double* C, const double* source, double* dC);

inline void micro_rhs(Execution e, const MicroCoefficients& k, double dx, int n, const double* a, const double* b,
                      double* dy) {
  e == Execution::parallel ? micro_rhs_parallel(k, dx, n, a, b, dy) : micro_rhs_serial(k, dx, n, a, b, dy);
}
inline void macro_rhs(Execution e, double dx, int n, const double* C, const double* source, double* dC) {
  e == Execution::parallel ? macro_rhs_parallel(dx, n, C, source, dC) : macro_rhs_serial(dx, n, C, source, dC);
}

}  // namespace msbc
