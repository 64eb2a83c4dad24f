#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "msbc/series/truncated_series.hpp"

namespace msbc {

enum class Side { left, right };

// (a, b) of the transform on the centre-stable manifold, in boundary values
// s1_0, s2_0, s3_0.
struct BoundaryConstraint {
  TruncatedSeries<Rational> a0;
  TruncatedSeries<Rational> b0;
};

// s1_0 and s3_0 as series in (s2_0, a0, b0).
struct RevertedBoundary {
  TruncatedSeries<Rational> s1;
  TruncatedSeries<Rational> s3;
};

// C - P Cx - Q Cx^2 = R at one end of the domain. P and R are polynomials in
// that end's Dirichlet data: (a0, b0) on the left, (aL, bL) on the right.
struct RobinBC {
  Side side = Side::left;
  TruncatedSeries<Rational> P;
  Rational Q;
  TruncatedSeries<Rational> R;

  bool operator==(const RobinBC& o) const { return side == o.side && P == o.P && Q == o.Q && R == o.R; }
};

struct NumericRobin {
  double P = 0.0, Q = 0.0, R = 0.0;
};

using TimeFunction = std::function<double(double)>;

struct BoundaryData {
  TimeFunction a0, b0, aL, bL;
};

VariablesPtr boundary_state_variables();        // s1_0 s2_0 s3_0
VariablesPtr reverted_variables();              // s2_0 a0 b0
VariablesPtr data_variables(Side side);         // a0 b0 | aL bL

// Input: the transform at eps = 1 over (s1..s4).
BoundaryConstraint centre_stable_restriction(const SeriesVector<Rational>& transform);
RevertedBoundary revert_boundary(const BoundaryConstraint& c);
// Substitutes the reverted series back; the result is (a0, b0) minus the data,
// which must vanish through the truncation order.
std::pair<TruncatedSeries<Rational>, TruncatedSeries<Rational>> reversion_residual(const BoundaryConstraint& c,
                                                                                  const RevertedBoundary& r);

// Keeps the terms of the reverted s1 series with total degree <= degree in
// (Cx, data); Q is the constant coefficient of Cx^2.
RobinBC assemble_left_bc(const RevertedBoundary& r, int degree = 2);
// Symmetry x -> L - x, a -> -b, b -> -a: P'(x, y) = -P(-y, -x), Q' = -Q,
// R'(x, y) = -R(-y, -x). Maps left to right and back.
RobinBC mirror(const RobinBC& bc);
RobinBC assemble_right_bc(const RevertedBoundary& r, int degree = 2);

// Linear Robin condition: P at zero data, Q = 0, R linear in the data.
RobinBC linearised(const RobinBC& bc);

NumericRobin specialize(const RobinBC& bc, double d1, double d2);
NumericRobin specialize(const RobinBC& bc, const BoundaryData& data, double t);
double residual(const NumericRobin& bc, double C, double Cx);
double residual(const RobinBC& bc, const BoundaryData& data, double t, double C, double Cx);

// One-variable form of P and R after substituting series for the data.
struct ProfileRobin {
  TruncatedSeries<Rational> P;  // in the profile variable
  Rational Q;
  TruncatedSeries<Rational> R;
};
ProfileRobin in_profile(const RobinBC& bc, const Rational& d1_amplitude, const Rational& d2_amplitude,
                        const std::string& profile_name = "f");

// Text form: "<side> P(a0,b0)= <poly> Q= <q> R(a0,b0)= <poly>".
std::string to_text(const RobinBC& bc);
RobinBC robin_from_text(const std::string& line);

}  // namespace msbc
