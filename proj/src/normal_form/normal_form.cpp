#include "msbc/normal_form/normal_form.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "msbc/series/compose.hpp"

namespace msbc {
namespace {

constexpr std::size_t kEps = 4;
// The slow evolution is asserted free of s3, s4 through cubic terms only.
constexpr int kIsochronDegree = 3;

template <class C>
C from_q(const Rational& r) {
  return CoeffTraits<C>::from_rational(r);
}

template <class C>
DenseMatrix<C> convert_matrix(const DenseMatrix<Rational>& m) {
  DenseMatrix<C> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = from_q<C>(m(i, j));
  return out;
}

template <class C>
bool is_zero_value(const C& x, double tol) {
  if constexpr (CoeffTraits<C>::exact)
    return sgn(x) == 0;
  else
    return std::fabs(x) <= tol;
}

// Eigenvectors of the linear part, grouped by eigenvalue and normalised so
// that the coordinate-map rows assigned to each eigenspace read them as the
// identity. Classes are ordered zero first, then by increasing eigenvalue,
// and take the map rows in that order.
template <class C>
struct Eigenbasis {
  DenseMatrix<C> to_fields;    // columns are the normalised eigenvectors
  DenseMatrix<C> from_fields;  // its inverse
  DenseMatrix<C> alignment;    // map * to_fields; identity when the map is an eigenbasis
  std::vector<C> lambda;       // per eigen-coordinate
};

template <class C>
Eigenbasis<C> make_basis(const SpatialSystem& system, const CoordinateMap& map) {
  const auto es = eigen_structure(system.linear);
  if (!es.real) throw ConstructionRefused("normal form: complex spectrum is not supported");
  if (!es.diagonalisable)
    throw ConstructionRefused("normal form: linear part of '" + system.name +
                              "' has a generalised eigenvector; embed it in a diagonalisable family first");
  if constexpr (CoeffTraits<C>::exact)
    if (!es.exact) throw PreconditionError("normal form: irrational eigenvalues need the floating construction");

  struct Cls {
    double value;
    std::optional<Rational> exact;
    std::vector<std::vector<C>> vectors;
  };
  std::vector<Cls> classes;
  for (const auto& p : es.pairs) {
    std::vector<C> v;
    if constexpr (CoeffTraits<C>::exact)
      v = *p.exact_vector;
    else
      v = p.vector;
    auto it = std::find_if(classes.begin(), classes.end(), [&](const Cls& c) {
      if (c.exact && p.exact_value) return *c.exact == *p.exact_value;
      return std::fabs(c.value - p.value) < 1e-9;
    });
    if (it == classes.end()) {
      classes.push_back({p.value, p.exact_value, {}});
      it = classes.end() - 1;
    }
    it->vectors.push_back(std::move(v));
  }
  auto is_zero = [](const Cls& c) { return c.exact ? sgn(*c.exact) == 0 : std::fabs(c.value) < 1e-12; };
  std::stable_sort(classes.begin(), classes.end(), [&](const Cls& x, const Cls& y) {
    bool zx = is_zero(x), zy = is_zero(y);
    if (zx != zy) return zx;
    return x.value < y.value;
  });

  const std::size_t n = system.linear.rows();
  const auto m = convert_matrix<C>(map.matrix);
  Eigenbasis<C> basis{DenseMatrix<C>(n, n), {}, {}, {}};
  std::size_t row = 0;
  for (const auto& cls : classes) {
    const std::size_t d = cls.vectors.size();
    DenseMatrix<C> v(n, d), mj(d, n);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < n; ++i) v(i, k) = cls.vectors[k][i];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t i = 0; i < n; ++i) mj(r, i) = m(row + r, i);
    auto b = (mj * v).inverse();
    if (!b) throw ConstructionRefused("normal form: coordinate map is not aligned with the eigenspaces");
    auto vn = v * *b;
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < n; ++i) basis.to_fields(i, row + k) = vn(i, k);
      if constexpr (CoeffTraits<C>::exact)
        basis.lambda.push_back(*cls.exact);
      else
        basis.lambda.push_back(cls.value);
    }
    row += d;
  }
  auto inv = basis.to_fields.inverse();
  if (!inv) throw ConstructionRefused("normal form: eigenvector matrix is singular");
  basis.from_fields = *inv;
  basis.alignment = m * basis.to_fields;

  auto diag = basis.from_fields * convert_matrix<C>(system.linear) * basis.to_fields;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !is_zero_value(diag(i, j), 1e-10))
        throw ConstructionRefused("normal form: eigenbasis does not diagonalise the linear part");
  return basis;
}

template <class C>
using Graded = std::vector<TruncatedSeries<C>>;  // index = total degree including eps

template <class C>
TruncatedSeries<C> graded_product(const std::vector<const Graded<C>*>& f, std::size_t first, int d,
                                  const TruncatedSeries<C>& zero) {
  const auto& g = *f[first];
  if (first + 1 == f.size()) return d >= 0 && d < int(g.size()) ? g[d] : zero;
  TruncatedSeries<C> out = zero;
  const int rest = int(f.size() - first - 1);
  for (int k = 1; k <= d - rest && k < int(g.size()); ++k) {
    if (g[k].empty()) continue;
    auto tail = graded_product(f, first + 1, d - k, zero);
    if (!tail.empty()) out += g[k] * tail;
  }
  return out;
}

template <class C>
NormalForm<C> construct_impl(const SpatialSystem& system, const CoordinateMap& map, const NormalFormOptions& opts) {
  if (opts.order < 1) throw PreconditionError("normal form: order must be at least 1");
  const int E = opts.param_order >= 0 ? opts.param_order : default_param_order(CoeffTraits<C>::exact, opts.order);
  const Truncation trunc{opts.order, E};
  const auto vars = normal_form_variables();
  const auto basis = make_basis<C>(system, map);
  const std::size_t n = 4;
  const int D = opts.order + E;
  const TruncatedSeries<C> zero(vars, trunc);

  auto nonlinear = system.nonlinear.template convert<C>();

  // y = s + Y in eigen-coordinates; Y and the evolution correction g are
  // filled grade by grade.
  std::vector<Graded<C>> Y(n, Graded<C>(D + 1, zero)), g(n, Graded<C>(D + 1, zero)), u(n, Graded<C>(D + 1, zero));
  Graded<C> eps(D + 1, zero);
  if (D >= 1) eps[1] = TruncatedSeries<C>::variable(vars, trunc, kEps);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      u[j][1] += TruncatedSeries<C>::variable(vars, trunc, i) * basis.to_fields(j, i);

  NormalForm<C> nf;
  for (int d = 2; d <= D; ++d) {
    // Nonlinearity at grade d in field coordinates.
    std::vector<TruncatedSeries<C>> f(n, zero);
    for (std::size_t r = 0; r < n; ++r)
      for (const auto& [mono, c] : nonlinear[r]) {
        std::vector<const Graded<C>*> factors;
        for (std::size_t v = 0; v < n; ++v)
          for (int e = 0; e < mono[v]; ++e) factors.push_back(&u[v]);
        for (int e = 0; e < mono[kEps]; ++e) factors.push_back(&eps);
        if (factors.empty()) throw PreconditionError("normal form: nonlinearity has a constant term");
        if (factors.size() == 1) throw PreconditionError("normal form: nonlinearity has an eps-free linear term");
        auto p = graded_product(factors, 0, d, zero);
        if (!p.empty()) f[r] += p * c;
      }

    std::vector<TruncatedSeries<C>> res(n, zero);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < n; ++r)
        if (!CoeffTraits<C>::is_zero(basis.from_fields(i, r))) res[i] += f[r] * basis.from_fields(i, r);
      for (std::size_t k = 0; k < n; ++k)
        for (int d1 = 2; d1 < d; ++d1) {
          const int d2 = d - d1 + 1;
          if (Y[i][d1].empty() || d2 > D || g[k][d2].empty()) continue;
          res[i] -= Y[i][d1].derivative(k) * g[k][d2];
        }
    }

    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [m, v] : res[i]) {
        C div = -basis.lambda[i];
        for (std::size_t q = 0; q < n; ++q) div += basis.lambda[q] * C(int(m[q]));
        ResonanceEntry entry{i, m, CoeffTraits<C>::to_double(div), std::nullopt, false};
        if constexpr (CoeffTraits<C>::exact) entry.exact_divisor = div;
        if (is_zero_value(div, opts.resonance_tolerance)) {
          g[i][d].add_term(m, v);
          entry.kept_in_evolution = true;
        } else {
          C y = v / div;
          Y[i][d].add_term(m, y);
        }
        nf.report.entries.push_back(std::move(entry));
      }

    // Resonant monomials are free in Y; fix them so that the map coordinates
    // (not the eigen-coordinates) carry no resonant part.
    const auto& K = basis.alignment;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j || is_zero_value(K(j, i), 1e-15)) continue;
        for (const auto& [m, v] : Y[i][d]) {
          C div = -basis.lambda[j];
          for (std::size_t q = 0; q < n; ++q) div += basis.lambda[q] * C(int(m[q]));
          if (!is_zero_value(div, opts.resonance_tolerance)) continue;
          C corr = -(K(j, i) * v / K(j, j));
          Y[j][d].add_term(m, corr);
        }
      }

    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (!Y[i][d].empty() && !CoeffTraits<C>::is_zero(basis.to_fields(j, i)))
          u[j][d] += Y[i][d] * basis.to_fields(j, i);
  }

  std::vector<TruncatedSeries<C>> t(n, zero), ev(n, zero);
  for (std::size_t j = 0; j < n; ++j) {
    for (int d = 1; d <= D; ++d) t[j] += u[j][d];
    ev[j] += TruncatedSeries<C>::variable(vars, trunc, j) * basis.lambda[j];
    for (int d = 2; d <= D; ++d) ev[j] += g[j][d];
  }
  nf.transform = SeriesVector<C>(std::move(t));
  nf.evolution = SeriesVector<C>(std::move(ev));
  nf.eigenvalues = basis.lambda;
  for (const auto* v : {&nf.transform, &nf.evolution})
    for (const auto& s : *v) nf.highest_parameter_power = std::max(nf.highest_parameter_power, s.max_param_degree());
  return nf;
}

template <class C>
std::vector<TruncatedSeries<C>> system_rhs(const SeriesVector<C>& transform, const SpatialSystem& sys) {
  const auto& vars = transform.variables();
  const auto trunc = transform.truncation();
  const bool has_eps = vars->contains("eps");
  const SpatialSystem effective = has_eps ? sys : sys.at_unit_parameter();
  auto nonlinear = effective.nonlinear.template convert<C>();
  TruncatedSeries<C> zero(vars, trunc);
  std::vector<TruncatedSeries<C>> repl(transform.components());
  repl.push_back(has_eps ? TruncatedSeries<C>::variable(vars, trunc, "eps") : zero);
  std::vector<TruncatedSeries<C>> out;
  for (std::size_t r = 0; r < 4; ++r) {
    auto f = compose(nonlinear[r], std::span<const TruncatedSeries<C>>(repl));
    for (std::size_t j = 0; j < 4; ++j) f += transform[j] * from_q<C>(effective.linear(r, j));
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

int default_param_order(bool exact, int order) { return exact ? 4 * order + 2 : 64; }

VariablesPtr normal_form_variables() {
  static const auto v = VariableSet::make({"s1", "s2", "s3", "s4"}, {"eps"});
  return v;
}

VariablesPtr slow_fast_variables() {
  static const auto v = VariableSet::make({"s1", "s2", "s3", "s4"});
  return v;
}

NormalForm<Rational> construct(const SpatialSystem& system, const CoordinateMap& map, const NormalFormOptions& opts) {
  return construct_impl<Rational>(system, map, opts);
}

NormalForm<double> construct_floating(const SpatialSystem& system, const CoordinateMap& map,
                                      const NormalFormOptions& opts) {
  return construct_impl<double>(system, map, opts);
}

template <class C>
SeriesVector<C> at_unit_parameter(const SeriesVector<C>& v) {
  const auto target = slow_fast_variables();
  const Truncation trunc{v.truncation().order, 0};
  std::vector<TruncatedSeries<C>> out;
  for (const auto& s : v) {
    TruncatedSeries<C> r(target, trunc);
    for (const auto& [m, c] : s) {
      Monomial mm = m;
      if (v.variables()->size() > 4) mm.set(kEps, 0);
      r.add_term(mm, c);
    }
    out.push_back(std::move(r));
  }
  return SeriesVector<C>(std::move(out));
}

template <class C>
SeriesVector<C> verify_conjugacy(const SeriesVector<C>& transform, const SeriesVector<C>& evolution,
                                 const SpatialSystem& system) {
  transform[0].check_compatible(evolution[0]);
  auto f = system_rhs(transform, system);
  std::vector<TruncatedSeries<C>> res;
  for (std::size_t r = 0; r < 4; ++r) {
    TruncatedSeries<C> lhs(transform.variables(), transform.truncation());
    for (std::size_t k = 0; k < 4; ++k) lhs += transform[r].derivative(k) * evolution[k];
    res.push_back(lhs - f[r]);
  }
  return SeriesVector<C>(std::move(res));
}

template SeriesVector<Rational> at_unit_parameter(const SeriesVector<Rational>&);
template SeriesVector<double> at_unit_parameter(const SeriesVector<double>&);
template SeriesVector<Rational> verify_conjugacy(const SeriesVector<Rational>&, const SeriesVector<Rational>&,
                                                 const SpatialSystem&);
template SeriesVector<double> verify_conjugacy(const SeriesVector<double>&, const SeriesVector<double>&,
                                               const SpatialSystem&);

StructureReport check_structure(const NormalForm<Rational>& nf, const CoordinateMap& map) {
  StructureReport rep;
  auto term = [](const char* what, std::size_t comp, const Monomial& m, std::size_t nv) {
    std::string s = fmt::format("{}{}:", what, comp + 1);
    for (std::size_t i = 0; i < nv; ++i) s += fmt::format(" {}", m[i]);
    return s;
  };
  const auto g1 = at_unit_parameter(nf.evolution);
  for (std::size_t j = 0; j < 2; ++j) {
    for (const auto& [m, c] : g1[j]) {
      if (!m[2] && !m[3]) continue;
      if (m.degree() <= kIsochronDegree) {
        rep.isochrons = false;
        rep.violations.push_back("fast variable in slow evolution " + term("G", j, m, 4));
      } else {
        rep.notes.push_back("resonant fast-variable term beyond cubic order " + term("G", j, m, 4) + " coefficient " +
                            to_string(c));
      }
    }
    for (const auto& [m, c] : nf.evolution[j])
      if (m[2] || m[3])
        rep.notes.push_back("resonant term cancelling at eps=1 " + term("G", j, m, 5) + " coefficient " +
                            to_string(c));
  }
  for (std::size_t j = 2; j < 4; ++j)
    for (const auto& [m, c] : g1[j])
      if (m[j] == 0) {
        rep.invariant_manifolds = false;
        rep.violations.push_back("evolution not divisible by its own variable " + term("G", j, m, 4));
      }

  auto slow = [](const TruncatedSeries<Rational>& s) {
    return s.filtered([](const Monomial& m, const Rational&) { return m[2] == 0 && m[3] == 0; });
  };
  const auto vp = nf.transform.variables();
  const auto tr = nf.transform.truncation();
  auto s1 = TruncatedSeries<Rational>::variable(vp, tr, 0), s2 = TruncatedSeries<Rational>::variable(vp, tr, 1);
  if (!(slow(nf.transform[0] + nf.transform[1]) == s1 * Rational(2))) {
    rep.slow_normalisation = false;
    rep.violations.push_back("(a+b) on the slow manifold differs from 2 s1");
  }
  if (!(slow(nf.transform[2] + nf.transform[3]) == s2 * Rational(2))) {
    rep.slow_normalisation = false;
    rep.violations.push_back("(a'+b') on the slow manifold differs from 2 s2");
  }

  DenseMatrix<Rational> lin(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 4; ++j) lin(r, j) = nf.transform[r].coefficient(Monomial::unit(j));
  const auto k = map.matrix * lin;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 4; ++j) {
      bool bad = (j < 2 && lin(r, j) != map.inverse(r, j)) || (r >= 2 && k(r, j) != Rational(r == j ? 1 : 0));
      if (bad) {
        rep.linear_part = false;
        rep.violations.push_back(fmt::format("linear coefficient ({}, s{}) is not aligned with the map", r, j + 1));
      }
    }
  return rep;
}

CrossValidation compare_unit_parameter(const SeriesVector<double>& t1, const SeriesVector<double>& g1,
                                       const SeriesVector<double>& t2, const SeriesVector<double>& g2,
                                       double tolerance) {
  static const char* names[] = {"a", "b", "a'", "b'", "G1", "G2", "G3", "G4"};
  CrossValidation cv;
  cv.tolerance = tolerance;
  // Discrepancies are measured relative to max(1, |coefficient|).
  auto scan = [&](const TruncatedSeries<double>& x, const TruncatedSeries<double>& y, const char* name) {
    auto diff = x - y;
    for (const auto& [m, c] : diff) {
      double rel = std::fabs(c) / std::max(1.0, std::fabs(x.coefficient(m)));
      if (rel > cv.max_discrepancy) {
        cv.max_discrepancy = rel;
        cv.worst_term = fmt::format("{} [{} {} {} {}]", name, m[0], m[1], m[2], m[3]);
      }
    }
  };
  for (std::size_t i = 0; i < 4; ++i) {
    scan(t1[i], t2[i], names[i]);
    scan(g1[i], g2[i], names[4 + i]);
  }
  cv.identical = cv.max_discrepancy <= tolerance;
  return cv;
}

CrossValidation cross_validate_embeddings(int order, int param_order_b, double tolerance) {
  const auto map = coordinate_map();
  NormalFormOptions a_opts{order, -1, 1e-9};
  NormalFormOptions b_opts{order, param_order_b, 1e-9};
  auto a = construct(build_embedding(Embedding::A), map, a_opts);
  auto b = construct_floating(build_embedding(Embedding::B), map, b_opts);
  auto ta = at_unit_parameter(a.transform).convert<double>();
  auto ga = at_unit_parameter(a.evolution).convert<double>();
  auto cv = compare_unit_parameter(ta, ga, at_unit_parameter(b.transform), at_unit_parameter(b.evolution), tolerance);
  cv.param_order_a = a.transform.truncation().param_order;
  cv.param_order_b = b.transform.truncation().param_order;
  return cv;
}

}  // namespace msbc
