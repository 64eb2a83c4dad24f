#include "msbc/boundary/boundary.hpp"

#include <cctype>
#include <sstream>

#include "msbc/series/compose.hpp"
#include "msbc/series/implicit_solve.hpp"
#include "msbc/series/serialize.hpp"

namespace msbc {
namespace {

using RS = TruncatedSeries<Rational>;

VariablesPtr joint_variables() {
  static const auto v = VariableSet::make({"s1_0", "s2_0", "s3_0", "a0", "b0"});
  return v;
}

RS reflect_data(const RS& p, Side to) {
  // p(x, y) -> -p(-y, -x) in the other side's variables.
  const auto target = data_variables(to);
  RS out(target, p.truncation());
  for (const auto& [m, c] : p) {
    std::vector<int> e{int(m[1]), int(m[0])};
    Rational k = c;
    if ((m[0] + m[1]) % 2 == 0) k = -k;
    out.add_term(Monomial(std::span<const int>(e)), k);
  }
  return out;
}

double eval2(const RS& p, double x, double y) {
  std::vector<double> pt{x, y};
  return p.evaluate_horner<double>(pt);
}

}  // namespace

VariablesPtr boundary_state_variables() {
  static const auto v = VariableSet::make({"s1_0", "s2_0", "s3_0"});
  return v;
}

VariablesPtr reverted_variables() {
  static const auto v = VariableSet::make({"s2_0", "a0", "b0"});
  return v;
}

VariablesPtr data_variables(Side side) {
  static const auto l = VariableSet::make({"a0", "b0"});
  static const auto r = VariableSet::make({"aL", "bL"});
  return side == Side::left ? l : r;
}

BoundaryConstraint centre_stable_restriction(const SeriesVector<Rational>& transform) {
  if (transform.size() != 4 || transform.variables()->size() != 4)
    throw StructuralError("centre-stable restriction: expected the eps = 1 transform over (s1..s4)");
  const auto target = boundary_state_variables();
  const Truncation trunc{transform.truncation().order, 0};
  std::vector<std::optional<std::size_t>> map{0, 1, 2, std::nullopt};
  auto restrict = [&](const RS& s) {
    auto on_manifold = s.filtered([](const Monomial& m, const Rational&) { return m[3] == 0; });
    return remap(on_manifold, target, trunc, std::span<const std::optional<std::size_t>>(map));
  };
  return {restrict(transform[0]), restrict(transform[1])};
}

RevertedBoundary revert_boundary(const BoundaryConstraint& c) {
  const auto joint = joint_variables();
  const Truncation trunc{c.a0.truncation().order, 0};
  std::vector<std::optional<std::size_t>> into{0, 1, 2};
  auto lift = [&](const RS& s) { return remap(s, joint, trunc, std::span<const std::optional<std::size_t>>(into)); };
  SeriesVector<Rational> eqs(std::vector<RS>{lift(c.a0) - RS::variable(joint, trunc, "a0"),
                                             lift(c.b0) - RS::variable(joint, trunc, "b0")});
  std::vector<std::size_t> unknowns{0, 2};
  auto sol = solve_implicit_system(eqs, std::span<const std::size_t>(unknowns));
  const auto target = reverted_variables();
  std::vector<std::optional<std::size_t>> out{std::nullopt, 0, std::nullopt, 1, 2};
  auto drop = [&](const RS& s) { return remap(s, target, trunc, std::span<const std::optional<std::size_t>>(out)); };
  return {drop(sol[0]), drop(sol[1])};
}

std::pair<RS, RS> reversion_residual(const BoundaryConstraint& c, const RevertedBoundary& r) {
  const auto vars = reverted_variables();
  const auto trunc = r.s1.truncation();
  std::vector<RS> repl{r.s1, RS::variable(vars, trunc, 0), r.s3};
  auto a = compose(c.a0, std::span<const RS>(repl)) - RS::variable(vars, trunc, "a0");
  auto b = compose(c.b0, std::span<const RS>(repl)) - RS::variable(vars, trunc, "b0");
  return {a, b};
}

RobinBC assemble_left_bc(const RevertedBoundary& r, int degree) {
  const auto data = data_variables(Side::left);
  const Truncation trunc{degree, 0};
  RobinBC bc{Side::left, RS(data, trunc), Rational(0), RS(data, trunc)};
  for (const auto& [m, c] : r.s1) {
    if (m.degree() > degree) continue;
    std::vector<int> e{int(m[1]), int(m[2])};
    Monomial dm{std::span<const int>(e)};
    switch (m[0]) {
      case 0: bc.R.add_term(dm, c); break;
      case 1: bc.P.add_term(dm, c); break;
      case 2:
        if (dm.degree() == 0) bc.Q = c;
        break;
      default: break;
    }
  }
  return bc;
}

RobinBC mirror(const RobinBC& bc) {
  Side to = bc.side == Side::left ? Side::right : Side::left;
  return {to, reflect_data(bc.P, to), Rational(-bc.Q), reflect_data(bc.R, to)};
}

RobinBC assemble_right_bc(const RevertedBoundary& r, int degree) { return mirror(assemble_left_bc(r, degree)); }

RobinBC linearised(const RobinBC& bc) {
  RobinBC lin = bc;
  lin.P = bc.P.filtered([](const Monomial& m, const Rational&) { return m.degree() == 0; });
  lin.Q = 0;
  lin.R = bc.R.filtered([](const Monomial& m, const Rational&) { return m.degree() <= 1; });
  return lin;
}

NumericRobin specialize(const RobinBC& bc, double d1, double d2) {
  return {eval2(bc.P, d1, d2), bc.Q.get_d(), eval2(bc.R, d1, d2)};
}

NumericRobin specialize(const RobinBC& bc, const BoundaryData& data, double t) {
  if (bc.side == Side::left) return specialize(bc, data.a0(t), data.b0(t));
  return specialize(bc, data.aL(t), data.bL(t));
}

double residual(const NumericRobin& bc, double C, double Cx) { return C - bc.P * Cx - bc.Q * Cx * Cx - bc.R; }

double residual(const RobinBC& bc, const BoundaryData& data, double t, double C, double Cx) {
  return residual(specialize(bc, data, t), C, Cx);
}

ProfileRobin in_profile(const RobinBC& bc, const Rational& d1_amplitude, const Rational& d2_amplitude,
                        const std::string& profile_name) {
  const auto fv = VariableSet::make({profile_name});
  const Truncation trunc{bc.R.truncation().order, 0};
  auto f = RS::variable(fv, trunc, 0);
  std::vector<RS> repl{f * d1_amplitude, f * d2_amplitude};
  auto sub = [&](const RS& p) { return compose(p.with_truncation(trunc), std::span<const RS>(repl)); };
  return {sub(bc.P), bc.Q, sub(bc.R)};
}

std::string to_text(const RobinBC& bc) {
  const auto& v = *data_variables(bc.side);
  std::string args = "(" + v.name(0) + "," + v.name(1) + ")";
  return std::string(bc.side == Side::left ? "left" : "right") + " P" + args + "= " + format_series(bc.P) +
         " Q= " + to_string(bc.Q) + " R" + args + "= " + format_series(bc.R);
}

namespace {

// Parses sums like "1/2 - 357/128*b0 + 3*a0^2" over the given variables.
RS parse_polynomial(const std::string& text, VariablesPtr vars, int degree) {
  RS out(vars, {degree, 0});
  std::istringstream is(text);
  std::string tok;
  int sign = 1;
  bool expect_term = true;
  while (is >> tok) {
    if (tok == "+" || tok == "-") {
      if (expect_term && tok == "-") {
        sign = -sign;
        continue;
      }
      sign = tok == "-" ? -1 : 1;
      expect_term = true;
      continue;
    }
    if (!expect_term) throw ValidationError("robin text: missing operator before '" + tok + "'");
    if (tok[0] == '-') {
      sign = -sign;
      tok = tok.substr(1);
    }
    Rational coeff(1);
    Monomial m;
    std::stringstream parts(tok);
    std::string factor;
    while (std::getline(parts, factor, '*')) {
      if (factor.empty()) throw ValidationError("robin text: empty factor in '" + tok + "'");
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        Rational c;
        if (c.set_str(factor, 10) != 0) throw ValidationError("robin text: bad coefficient '" + factor + "'");
        c.canonicalize();
        coeff *= c;
        continue;
      }
      auto caret = factor.find('^');
      std::string name = factor.substr(0, caret);
      int power = caret == std::string::npos ? 1 : std::stoi(factor.substr(caret + 1));
      auto idx = vars->index_of(name);
      m.set(idx, m[idx] + power);
    }
    if (m.degree() > degree) throw ValidationError("robin text: term '" + tok + "' exceeds the degree");
    out.add_term(m, sign < 0 ? Rational(-coeff) : coeff);
    sign = 1;
    expect_term = false;
  }
  return out;
}

}  // namespace

RobinBC robin_from_text(const std::string& line) {
  std::istringstream is(line);
  std::string side;
  is >> side;
  if (side != "left" && side != "right") throw ValidationError("robin text: side must be left or right");
  RobinBC bc;
  bc.side = side == "left" ? Side::left : Side::right;
  const auto vars = data_variables(bc.side);
  const std::string args = "(" + vars->name(0) + "," + vars->name(1) + ")= ";
  auto p_at = line.find(" P" + args), q_at = line.find(" Q= "), r_at = line.find(" R" + args);
  if (p_at == std::string::npos || q_at == std::string::npos || r_at == std::string::npos || !(p_at < q_at && q_at < r_at))
    throw ValidationError("robin text: expected 'P" + args + "... Q= ... R" + args + "...'");
  const auto skip = 2 + args.size();
  std::string p_text = line.substr(p_at + skip, q_at - p_at - skip);
  std::string q_text = line.substr(q_at + 4, r_at - q_at - 4);
  std::string r_text = line.substr(r_at + skip);
  int degree = 0;
  for (auto* t : {&p_text, &r_text})
    for (char ch : *t)
      if (ch == '^') degree = std::max(degree, 2);
  degree = std::max(degree, 8);  // generous; terms are checked individually
  bc.P = parse_polynomial(p_text, vars, degree);
  bc.R = parse_polynomial(r_text, vars, degree);
  auto q_trim = q_text.substr(0, q_text.find_last_not_of(' ') + 1);
  if (bc.Q.set_str(q_trim, 10) != 0) throw ValidationError("robin text: bad Q '" + q_trim + "'");
  bc.Q.canonicalize();
  // Normalise truncation to the smallest degree that holds every term.
  int used = 0;
  for (const auto* p : {&bc.P, &bc.R})
    for (const auto& [m, c] : *p) used = std::max(used, m.degree());
  used = std::max(used, 2);
  bc.P = bc.P.with_truncation({used, 0});
  bc.R = bc.R.with_truncation({used, 0});
  return bc;
}

}  // namespace msbc
