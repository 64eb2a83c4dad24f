#include "msbc/spatial/spatial_system.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "msbc/series/compose.hpp"
#include "msbc/series/serialize.hpp"

namespace msbc {
namespace {

using RS = TruncatedSeries<Rational>;

Rational q(long n, long d = 1) { return make_rational(n, d); }

DenseMatrix<Rational> matrix4(const long (&num)[4][4], long den) {
  DenseMatrix<Rational> m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = q(num[i][j], den);
  return m;
}

struct Fields {
  RS a, b, ap, bp, eps;
};

Fields fields() {
  auto v = field_variables();
  auto t = field_truncation();
  return {RS::variable(v, t, 0), RS::variable(v, t, 1), RS::variable(v, t, 2), RS::variable(v, t, 3),
          RS::variable(v, t, 4)};
}

// Quadratic reaction terms common to every member of the family.
SeriesVector<Rational> reaction(const Fields& f, const RS& extra_a, const RS& extra_b, const RS& extra_ap,
                                const RS& extra_bp) {
  return SeriesVector<Rational>(std::vector<RS>{extra_a, extra_b, f.a * f.a * q(-1, 2) + extra_ap,
                                                f.b * f.b * q(1, 2) + extra_bp});
}

}  // namespace

VariablesPtr field_variables() {
  static const auto vars = VariableSet::make({"a", "b", "ap", "bp"}, {"eps"});
  return vars;
}

Truncation field_truncation() { return {2, 1}; }

SpatialSystem build_original() {
  static const long m[4][4] = {{0, 0, 6, 0}, {0, 0, 0, 6}, {1, -1, 2, 0}, {-1, 1, 0, -2}};
  auto f = fields();
  RS zero(field_variables(), field_truncation());
  return {"original", matrix4(m, 6), reaction(f, zero, zero, zero, zero)};
}

SpatialSystem build_embedding(Embedding variant) {
  auto f = fields();
  const auto e_ap = f.eps * f.ap, e_bp = f.eps * f.bp;
  if (variant == Embedding::A) {
    static const long m[4][4] = {{0, 0, 6, -6}, {0, 0, -6, 6}, {1, -1, -1, 3}, {-1, 1, -3, 1}};
    auto mix = (e_ap - e_bp) * q(1, 2);
    return {"embedding-A", matrix4(m, 6), reaction(f, e_bp, e_ap, mix, mix)};
  }
  static const long m[4][4] = {{0, 0, 6, -6}, {0, 0, -6, 6}, {1, -1, 1, 1}, {-1, 1, -1, -1}};
  auto mix = (e_ap - e_bp) * q(1, 6);
  return {"embedding-B", matrix4(m, 6), reaction(f, e_bp, e_ap, mix, mix)};
}

DenseMatrix<Rational> SpatialSystem::effective_linear() const {
  auto m = linear;
  const std::size_t eps = 4;
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& [mono, c] : nonlinear[i]) {
      if (mono.degree() != 2 || mono[eps] != 1) continue;
      for (std::size_t j = 0; j < 4; ++j)
        if (mono[j] == 1) m(i, j) += c;
    }
  return m;
}

SpatialSystem SpatialSystem::at_unit_parameter() const {
  SpatialSystem out{name + "@eps=1", effective_linear(), {}};
  std::vector<RS> comps;
  for (std::size_t i = 0; i < 4; ++i)
    comps.push_back(nonlinear[i].filtered([](const Monomial& m, const Rational&) { return m[4] == 0; }));
  // Any eps dependence beyond the eps-linear terms is fixed at eps = 1.
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& [m, c] : nonlinear[i])
      if (m[4] > 0 && !(m.degree() == 2 && m[4] == 1)) {
        Monomial mm = m;
        mm.set(4, 0);
        comps[i].add_term(mm, c);
      }
  out.nonlinear = SeriesVector<Rational>(std::move(comps));
  return out;
}

CoordinateMap coordinate_map() {
  static const long m[4][4] = {{4, 4, 0, 0}, {0, 0, 4, 4}, {3, -3, -3, 9}, {3, -3, 9, -3}};
  auto mat = matrix4(m, 8);
  auto inv = mat.inverse();
  if (!inv) throw StructuralError("coordinate map is singular");
  return {mat, *inv};
}

void write_system(std::ostream& os, const SpatialSystem& sys) {
  os << "# system " << sys.name << "\n# linear\n";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) os << (j ? " " : "") << to_string(sys.linear(i, j));
    os << '\n';
  }
  os << "# nonlinear\n";
  write_series_vector(os, sys.nonlinear, {"a", "b", "ap", "bp"});
}

SpatialSystem read_system(std::istream& is) {
  SpatialSystem sys;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# system ", 0) != 0) throw ValidationError("system text: missing header");
  sys.name = line.substr(9);
  if (!std::getline(is, line) || line != "# linear") throw ValidationError("system text: missing linear block");
  sys.linear = DenseMatrix<Rational>(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::getline(is, line)) throw ValidationError("system text: truncated linear block");
    std::istringstream ls(line);
    for (std::size_t j = 0; j < 4; ++j) {
      std::string tok;
      if (!(ls >> tok) || sys.linear(i, j).set_str(tok, 10) != 0) throw ValidationError("system text: bad entry");
      sys.linear(i, j).canonicalize();
    }
  }
  if (!std::getline(is, line) || line != "# nonlinear") throw ValidationError("system text: missing nonlinear block");
  sys.nonlinear = read_series_vector(is, field_variables(), field_truncation());
  if (sys.nonlinear.size() != 4) throw ValidationError("system text: expected four components");
  return sys;
}

}  // namespace msbc
