#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msbc/series/truncated_series.hpp"
#include "msbc/spatial/spatial_system.hpp"

namespace msbc {

struct ResonanceEntry {
  std::size_t component = 0;
  Monomial monomial;
  double divisor = 0.0;
  std::optional<Rational> exact_divisor;
  bool kept_in_evolution = false;  // otherwise removed into the transform
};

struct ResonanceReport {
  std::vector<ResonanceEntry> entries;
};

struct NormalFormOptions {
  int order = 3;
  // Cap on the eps exponent; negative selects the default for the arithmetic.
  int param_order = -1;
  double resonance_tolerance = 1e-9;  // floating construction only
};

// Exact runs need 4*order+2 eps powers for the series to terminate; the
// floating run relies on convergence in eps instead.
int default_param_order(bool exact, int order);

template <class C>
struct NormalForm {
  SeriesVector<C> transform;  // (a, b, a', b') as series in (s1..s4, eps)
  SeriesVector<C> evolution;  // ds_j/dx
  ResonanceReport report;
  std::vector<C> eigenvalues;
  int highest_parameter_power = 0;
};

VariablesPtr normal_form_variables();  // s1 s2 s3 s4 | eps
VariablesPtr slow_fast_variables();    // s1 s2 s3 s4

// Exact construction; the spectrum of the linear part must be rational.
NormalForm<Rational> construct(const SpatialSystem& system, const CoordinateMap& map,
                               const NormalFormOptions& opts = {});
// Same construction in double precision; accepts irrational spectra.
NormalForm<double> construct_floating(const SpatialSystem& system, const CoordinateMap& map,
                                      const NormalFormOptions& opts = {});

// eps := 1, result over (s1..s4) truncated at the same state order.
template <class C>
SeriesVector<C> at_unit_parameter(const SeriesVector<C>& v);

// DT . G - F(T). Over (s1..s4) the system is taken at eps = 1.
template <class C>
SeriesVector<C> verify_conjugacy(const SeriesVector<C>& transform, const SeriesVector<C>& evolution,
                                 const SpatialSystem& system);

// Isochron and invariant-manifold properties are checked on the eps = 1
// evolution; resonant fast-variable terms that only cancel after summing the
// eps series are listed as notes.
struct StructureReport {
  bool isochrons = true;            // slow evolution free of s3, s4
  bool invariant_manifolds = true;  // G3 divisible by s3, G4 by s4
  bool slow_normalisation = true;   // (a+b)|slow = 2 s1, (a'+b')|slow = 2 s2, every eps power
  bool linear_part = true;          // eps^0 linear part: slow columns of the inverse map, map rows 3-4 read s3, s4
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool ok() const { return isochrons && invariant_manifolds && slow_normalisation && linear_part; }
};

StructureReport check_structure(const NormalForm<Rational>& nf, const CoordinateMap& map);

struct CrossValidation {
  bool identical = false;
  double max_discrepancy = 0.0;
  std::string worst_term;
  int param_order_a = 0, param_order_b = 0;
  double tolerance = 1e-12;
};

CrossValidation cross_validate_embeddings(int order, int param_order_b = -1, double tolerance = 1e-12);
CrossValidation compare_unit_parameter(const SeriesVector<double>& t1, const SeriesVector<double>& g1,
                                       const SeriesVector<double>& t2, const SeriesVector<double>& g2,
                                       double tolerance);

}  // namespace msbc
