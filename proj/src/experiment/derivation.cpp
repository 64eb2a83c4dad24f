#include "msbc/experiment/derivation.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "msbc/errors.hpp"
#include "msbc/series/serialize.hpp"

namespace msbc {
namespace {

const std::vector<std::string> kFieldNames{"a", "b", "ap", "bp"};
const std::vector<std::string> kEvolutionNames{"G1", "G2", "G3", "G4"};

TruncatedSeries<Rational> through_quadratic(const TruncatedSeries<Rational>& s) {
  return s.filtered([&](const Monomial& m, const Rational&) { return s.state_degree(m) <= 2; });
}

std::size_t low_degree_terms(const SeriesVector<Rational>& v, int order) {
  std::size_t n = 0;
  for (const auto& s : v)
    for (const auto& [m, c] : s)
      if (s.state_degree(m) <= order) ++n;
  return n;
}

std::string monomial_name(const Monomial& m, const VariableSet& vars) {
  std::string t;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (m[i] == 0) continue;
    if (!t.empty()) t += '*';
    t += vars.name(i);
    if (m[i] > 1) t += '^' + std::to_string(m[i]);
  }
  return t.empty() ? "1" : t;
}

// p(x) at x = +-sqrt(2) written as A +- B sqrt(2).
std::pair<Rational, Rational> at_sqrt2(const std::vector<Rational>& p) {
  Rational A = 0, B = 0, pow2 = 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k % 2 == 0) {
      A += p[k] * pow2;
    } else {
      B += p[k] * pow2;
      pow2 *= 2;
    }
  }
  return {A, B};
}

// "- (P)*Cx", or a signed single term when P has one term.
std::string slope_term(const TruncatedSeries<Rational>& P, int digits) {
  if (P.empty()) return "";
  if (P.size() == 1) {
    auto text = format_rounded(P, digits);
    return text.front() == '-' ? " + " + text.substr(1) + "*Cx" : " - " + text + "*Cx";
  }
  return " - (" + format_rounded(P, digits) + ")*Cx";
}

template <class BC>
std::string equation(const BC& bc, int digits) {
  std::string out = "C" + slope_term(bc.P, digits);
  if (sgn(bc.Q) != 0) {
    Rational q = round_significant(bc.Q, digits);
    out += (sgn(q) > 0 ? " - " : " + ") + decimal_string(abs(q), digits) + "*Cx^2";
  }
  return out + " = " + format_rounded(bc.R, digits);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + p.string());
  os << text;
}

}  // namespace

std::string robin_equation(const RobinBC& bc, int digits) { return equation(bc, digits); }
std::string robin_equation(const ProfileRobin& bc, int digits) { return equation(bc, digits); }

Derivation run_derivation(const DerivationOptions& opts) {
  if (opts.order < 2) throw ValidationError("derive: order must be at least 2");
  Derivation d;
  d.options = opts;
  const auto system = build_embedding(Embedding::A);
  const auto map = coordinate_map();
  NormalFormOptions nfo;
  nfo.order = opts.order;
  d.graded = construct(system, map, nfo);
  d.transform = at_unit_parameter(d.graded.transform);
  d.evolution = at_unit_parameter(d.graded.evolution);
  d.conjugacy_terms = low_degree_terms(verify_conjugacy(d.transform, d.evolution, system), opts.order);
  d.structure = check_structure(d.graded, map);
  d.original_spectrum = eigen_structure(build_original().linear);

  d.constraint = centre_stable_restriction(d.transform);
  d.reverted = revert_boundary(d.constraint);
  auto [ra, rb] = reversion_residual(d.constraint, d.reverted);
  d.roundtrip_terms = ra.size() + rb.size();
  d.left = assemble_left_bc(d.reverted);
  d.right = assemble_right_bc(d.reverted);

  if (opts.cross_validate) {
    d.xval = cross_validate_embeddings(opts.order, -1, opts.xval_tolerance);
  } else {
    d.xval.identical = true;
    d.xval.tolerance = opts.xval_tolerance;
    d.xval.worst_term = "skipped";
  }
  return d;
}

void write_derivation(const Derivation& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int order = d.options.order;
  std::ostringstream r;
  fmt::print(r, "# normal-form derivation, variant A embedding, order {}\n", order);
  fmt::print(r, "# coefficients at eps = 1, rounded half-even to 2 significant figures\n\n");

  fmt::print(r, "[spectrum]\n");
  {
    const auto& es = d.original_spectrum;
    std::vector<std::string> ev;
    for (const auto& p : es.pairs) ev.push_back(p.exact_value ? to_string(*p.exact_value) : fmt::format("{:.12g}", p.value));
    fmt::print(r, "original linear part: characteristic polynomial (low to high) =");
    for (const auto& c : es.characteristic) fmt::print(r, " {}", to_string(c));
    fmt::print(r, "\n");
    std::vector<std::string> spec;
    for (double v : es.spectrum) spec.push_back(fmt::format("{:.12g}", v));
    fmt::print(r, "original linear part: eigenvalues {{{}}}, diagonalisable = {}\n", fmt::join(spec, ", "),
               es.diagonalisable ? "yes" : "no");
    auto [A, B] = at_sqrt2(es.characteristic);
    bool root = sgn(A) == 0 && sgn(B) == 0;
    fmt::print(r, "check +-sqrt(2): char poly = {} +- ({})*sqrt(2) -> {}\n", to_string(A), to_string(B),
               root ? "eigenvalue" : "NOT an eigenvalue (quoted +-sqrt(2) disagrees with the computed spectrum)");
    std::vector<std::string> ga;
    for (const auto& v : d.graded.eigenvalues) ga.push_back(to_string(v));
    fmt::print(r, "embedded linear part (eps = 0): eigenvalues {{{}}}\n\n", fmt::join(ga, ", "));
  }

  fmt::print(r, "[transform]  quadratic terms, as printed conventionally\n");
  for (std::size_t i = 0; i < 4; ++i)
    fmt::print(r, "{} = {}\n", kFieldNames[i], format_rounded(through_quadratic(d.transform[i])));
  fmt::print(r, "\n[evolution]  quadratic terms\n");
  for (std::size_t i = 0; i < 4; ++i)
    fmt::print(r, "{} = {}\n", kEvolutionNames[i], format_rounded(through_quadratic(d.evolution[i])));
  fmt::print(r, "\n[transform]  exact, through order {}\n", order);
  for (std::size_t i = 0; i < 4; ++i) fmt::print(r, "{} = {}\n", kFieldNames[i], format_series(d.transform[i]));
  fmt::print(r, "\n[evolution]  exact, through order {}\n", order);
  for (std::size_t i = 0; i < 4; ++i) fmt::print(r, "{} = {}\n", kEvolutionNames[i], format_series(d.evolution[i]));
  fmt::print(r, "highest eps power used: {}\n", d.graded.highest_parameter_power);
  fmt::print(r, "conjugacy residual terms of degree <= {}: {}\n\n", order, d.conjugacy_terms);

  fmt::print(r, "[structure]\n");
  fmt::print(r, "isochrons: {}\ninvariant manifolds: {}\nslow normalisation: {}\nlinear part: {}\n",
             d.structure.isochrons ? "ok" : "VIOLATED", d.structure.invariant_manifolds ? "ok" : "VIOLATED",
             d.structure.slow_normalisation ? "ok" : "VIOLATED", d.structure.linear_part ? "ok" : "VIOLATED");
  for (const auto& v : d.structure.violations) fmt::print(r, "violation: {}\n", v);
  for (const auto& n : d.structure.notes) fmt::print(r, "note: {}\n", n);
  fmt::print(r, "note: C := s1, the slow coordinate (a+b)/2; Cx := s2\n\n");

  fmt::print(r, "[boundary]  centre-stable manifold s4 = 0 at x = 0\n");
  fmt::print(r, "a0 = {}\nb0 = {}\n", format_rounded(through_quadratic(d.constraint.a0)),
             format_rounded(through_quadratic(d.constraint.b0)));
  fmt::print(r, "s1_0 = {}\ns3_0 = {}\n", format_rounded(through_quadratic(d.reverted.s1)),
             format_rounded(through_quadratic(d.reverted.s3)));
  fmt::print(r, "reversion round-trip residual terms of degree <= {}: {}\n\n", order, d.roundtrip_terms);

  fmt::print(r, "[robin]\n");
  fmt::print(r, "left: {}\n", robin_equation(d.left));
  fmt::print(r, "right: {}\n", robin_equation(d.right));
  fmt::print(r, "linear left: {}\n", robin_equation(linearised(d.left)));
  fmt::print(r, "linear right: {}\n", robin_equation(linearised(d.right)));
  const auto& k = d.options.profile;
  fmt::print(r, "profile left (a0 = {}*f, b0 = {}*f): {}\n", to_string(k[0]), to_string(k[1]),
             robin_equation(in_profile(d.left, k[0], k[1])));
  fmt::print(r, "profile right (aL = {}*f, bL = {}*f): {}\n\n", to_string(k[2]), to_string(k[3]),
             robin_equation(in_profile(d.right, k[2], k[3])));

  fmt::print(r, "[cross-validation]\n");
  fmt::print(r, "embeddings A and B at eps = 1: {}\n", d.xval.identical ? "identical" : "DIFFERENT");
  fmt::print(r, "max relative discrepancy {:.3e} (tolerance {:.1e}) at {}\n", d.xval.max_discrepancy,
             d.xval.tolerance, d.xval.worst_term);
  write_file(dir / "report.txt", r.str());

  auto series_file = [&](const std::string& name, const SeriesVector<Rational>& v,
                         const std::vector<std::string>& names) {
    std::ostringstream os;
    write_series_vector(os, v, names);
    write_file(dir / name, os.str());
  };
  series_file("transform.series", d.transform, kFieldNames);
  series_file("evolution.series", d.evolution, kEvolutionNames);
  series_file("transform_graded.series", d.graded.transform, kFieldNames);
  series_file("evolution_graded.series", d.graded.evolution, kEvolutionNames);
  series_file("constraint.series", SeriesVector<Rational>({d.constraint.a0, d.constraint.b0}), {"a0", "b0"});
  series_file("reverted.series", SeriesVector<Rational>({d.reverted.s1, d.reverted.s3}), {"s1_0", "s3_0"});

  std::ostringstream res;
  fmt::print(res, "# component monomial divisor action\n");
  const auto& vars = *d.graded.transform.variables();
  for (const auto& e : d.graded.report.entries)
    fmt::print(res, "G{} {} {} {}\n", e.component + 1, monomial_name(e.monomial, vars),
               e.exact_divisor ? to_string(*e.exact_divisor) : fmt::format("{:.12g}", e.divisor),
               e.kept_in_evolution ? "kept" : "removed");
  write_file(dir / "resonance.txt", res.str());

  write_file(dir / "robin.txt", to_text(d.left) + "\n" + to_text(d.right) + "\n");
  write_file(dir / "crossval.txt",
             fmt::format("verdict {}\nmax_discrepancy {:.6e}\ntolerance {:.1e}\nworst {}\n",
                         d.xval.identical ? "identical" : "different", d.xval.max_discrepancy, d.xval.tolerance,
                         d.xval.worst_term));
}

std::pair<RobinBC, RobinBC> load_robin(const std::filesystem::path& dir) {
  std::ifstream is(dir / "robin.txt");
  if (!is) throw ValidationError("cannot read " + (dir / "robin.txt").string());
  std::string line;
  std::optional<RobinBC> left, right;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto bc = robin_from_text(line);
    (bc.side == Side::left ? left : right) = bc;
  }
  if (!left || !right) throw ValidationError("robin.txt must contain a left and a right condition");
  return {*left, *right};
}

}  // namespace msbc
