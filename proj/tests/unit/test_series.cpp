#include <doctest.h>

#include <random>
#include <sstream>

#include "msbc/series/compose.hpp"
#include "msbc/series/implicit_solve.hpp"
#include "msbc/series/serialize.hpp"

using namespace msbc;

namespace {

using RS = TruncatedSeries<Rational>;

auto xy() { return VariableSet::make({"x", "y"}); }

}  // namespace

TEST_CASE("arithmetic respects the state-degree truncation") {
  auto v = xy();
  Truncation t{3, 0};
  auto x = RS::variable(v, t, "x");
  auto y = RS::variable(v, t, "y");
  auto one = RS::constant(v, t, 1);
  auto p = one + x;
  auto q = p * p * p * p;  // (1+x)^4 truncated at degree 3
  CHECK(q.coefficient(Monomial::unit(0, 3)) == 4);
  CHECK(q.coefficient(Monomial::unit(0, 4)) == 0);
  CHECK(q.size() == 4);
  auto d = (x * x * y).derivative(0);
  CHECK(d == RS(x * y * Rational(2)));
  CHECK((x - x).empty());
}

TEST_CASE("parameter variables carry their own cap") {
  auto v = VariableSet::make({"s"}, {"eps"});
  Truncation t{2, 1};
  auto s = RS::variable(v, t, "s");
  auto e = RS::variable(v, t, "eps");
  auto p = (s + e) * (s + e);
  std::vector<int> se{1, 1};
  CHECK(p.coefficient(Monomial(std::span<const int>(se))) == 2);
  CHECK(p.coefficient(Monomial::unit(1, 2)) == 0);  // eps^2 beyond the cap
  CHECK(p.coefficient(Monomial::unit(0, 2)) == 1);
}

TEST_CASE("mismatched operands are structural errors") {
  auto s1 = RS::variable(xy(), {3, 0}, 0);
  auto s2 = RS::variable(xy(), {2, 0}, 0);
  CHECK_THROWS_AS(s1 + s2, StructuralError);
  auto other = RS::variable(VariableSet::make({"u", "v"}), {3, 0}, 0);
  CHECK_THROWS_AS(s1 * other, StructuralError);
}

TEST_CASE("composition rejects constant terms in used variables") {
  auto v = xy();
  Truncation t{3, 0};
  auto x = RS::variable(v, t, 0);
  auto shifted = x + RS::constant(v, t, 1);
  std::vector<RS> repl{shifted, RS::variable(v, t, 1)};
  CHECK_THROWS_AS(compose(x * x, std::span<const RS>(repl)), PreconditionError);
  // the unused variable may be replaced by anything
  std::vector<RS> ok{RS::variable(v, t, 1), shifted};
  CHECK(compose(x * x, std::span<const RS>(ok)) == RS::variable(v, t, 1) * RS::variable(v, t, 1));
}

TEST_CASE("Horner evaluation agrees with direct summation") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  auto v = VariableSet::make({"a", "b", "c"}, {"e"});
  Truncation t{4, 3};
  RS p(v, t);
  for (int i = 0; i < 60; ++i) {
    std::vector<int> e{int(rng() % 3), int(rng() % 3), int(rng() % 2), int(rng() % 4)};
    p.add_term(Monomial(std::span<const int>(e)), make_rational(num(rng), den(rng)));
  }
  std::vector<Rational> pt{make_rational(1, 3), make_rational(-2, 5), make_rational(3, 2), make_rational(1, 7)};
  CHECK(p.evaluate<Rational>(pt) == p.evaluate_horner<Rational>(pt));
  std::vector<double> pd{0.3, -0.4, 1.5, 0.14};
  CHECK(p.evaluate<double>(pd) == doctest::Approx(p.evaluate_horner<double>(pd)).epsilon(1e-13));
}

TEST_CASE("series reversion by the chord iteration") {
  // x - y - x^2 = 0 has the root x = y + y^2 + 2y^3 + 5y^4 (Catalan numbers).
  auto v = xy();
  Truncation t{4, 0};
  auto x = RS::variable(v, t, 0);
  auto y = RS::variable(v, t, 1);
  SeriesVector<Rational> eq(std::vector<RS>{x - y - x * x});
  std::vector<std::size_t> unk{0};
  auto sol = solve_implicit_system(eq, std::span<const std::size_t>(unk));
  CHECK(sol[0].coefficient(Monomial::unit(1, 1)) == 1);
  CHECK(sol[0].coefficient(Monomial::unit(1, 2)) == 1);
  CHECK(sol[0].coefficient(Monomial::unit(1, 3)) == 2);
  CHECK(sol[0].coefficient(Monomial::unit(1, 4)) == 5);

  SeriesVector<Rational> singular(std::vector<RS>{x * x - y});
  CHECK_THROWS_AS(solve_implicit_system(singular, std::span<const std::size_t>(unk)), ReversionError);
}

TEST_CASE("text serialisation round-trips") {
  auto v = VariableSet::make({"s1", "s2"}, {"eps"});
  Truncation t{3, 2};
  auto s1 = RS::variable(v, t, 0), s2 = RS::variable(v, t, 1), e = RS::variable(v, t, 2);
  auto p = s1 * make_rational(-873, 256) + s1 * s2 * e * make_rational(3, 2) + s2 * s2 * s2;
  std::stringstream ss;
  write_series(ss, p);
  auto text = ss.str();
  CHECK(text.find("-873/256 1 0 0\n") != std::string::npos);
  auto back = read_series(ss, v, t);
  CHECK(back == p);
  std::stringstream bad("1/2 1 0\n");
  CHECK_THROWS_AS(read_series(bad, v, t), ValidationError);
}
