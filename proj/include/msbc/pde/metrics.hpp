#pragma once

#include <iosfwd>

#include "msbc/pde/states.hpp"

namespace msbc {

// a = C + C^2/2 - Cx, b = C - C^2/2 + Cx; Cx central inside, second-order
// one-sided at the ends.
MicroState reconstruct_micro(const MacroState& macro);

struct Window {
  double lo = 5.0, hi = 25.0;
};

struct ErrorMetrics {
  double linf_mean = 0.0;    // max |C - (a+b)/2|
  double l2_mean = 0.0;      // sqrt(sum e^2 dx)
  double linf_fields = 0.0;  // max over a and b of |reconstructed - micro|
};

// Streaming single pass over the window nodes.
ErrorMetrics interior_error(const MicroState& micro, const MacroState& macro, Window w = {});
// Collects the nodal errors, sorts them and reads off the extremes; the L2
// sum runs over the sorted values. Kept as an independent check.
ErrorMetrics interior_error_sorted(const MicroState& micro, const MacroState& macro, Window w = {});

// Rows "t,x,field,value".
void write_csv(std::ostream& os, const MicroState& s);
void write_csv(std::ostream& os, const MacroState& s);
void write_csv_header(std::ostream& os);

}  // namespace msbc
