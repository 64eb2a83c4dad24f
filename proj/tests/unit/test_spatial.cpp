#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "msbc/normal_form/normal_form.hpp"
#include "msbc/spatial/eigen_structure.hpp"
#include "msbc/spatial/spatial_system.hpp"

using namespace msbc;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

std::vector<double> numeric_eigenvalues(const DenseMatrix<Rational>& a) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = a(i, j).get_d();
  Eigen::EigenSolver<Eigen::Matrix4d> es(m);
  std::vector<double> ev;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(es.eigenvalues()[i].imag()) < 1e-7);  // defective zero pair splits by ~sqrt(eps)
    ev.push_back(es.eigenvalues()[i].real());
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

TEST_CASE("original system matrix and nonlinearity") {
  auto sys = build_original();
  CHECK(sys.linear(2, 0) == q(1, 6));
  CHECK(sys.linear(3, 0) == q(-1, 6));
  CHECK(sys.linear(2, 2) == q(1, 3));
  CHECK(sys.linear(3, 3) == q(-1, 3));
  CHECK(sys.linear(0, 2) == 1);
  std::vector<Rational> origin(5, Rational(0));
  for (const auto& c : sys.nonlinear) CHECK(c.evaluate<Rational>(origin) == 0);
  std::vector<Rational> p{q(1), q(2), q(0), q(0), q(0)};
  CHECK(sys.nonlinear[2].evaluate<Rational>(p) == q(-1, 2));
  CHECK(sys.nonlinear[3].evaluate<Rational>(p) == 2);
}

TEST_CASE("numeric spectrum of the original matrix is 0, 0 and plus or minus 2/3") {
  auto ev = numeric_eigenvalues(build_original().linear);
  CHECK(ev[0] == doctest::Approx(-2.0 / 3).epsilon(1e-10));
  CHECK(std::fabs(ev[1]) < 1e-7);  // a double root, so only sqrt(eps) accurate
  CHECK(std::fabs(ev[2]) < 1e-7);
  CHECK(ev[3] == doctest::Approx(2.0 / 3).epsilon(1e-10));

  auto es = eigen_structure(build_original().linear);
  CHECK(es.exact);
  CHECK_FALSE(es.diagonalisable);  // the zero eigenvalue has a generalised eigenvector
  auto p = characteristic_polynomial(build_original().linear);
  CHECK(p == std::vector<Rational>{0, 0, q(-4, 9), 0, 1});
}

TEST_CASE("both embeddings reduce to the original system at unit parameter") {
  auto orig = build_original();
  for (auto v : {Embedding::A, Embedding::B}) {
    auto e = build_embedding(v);
    CHECK(e.effective_linear() == orig.linear);
    auto u = e.at_unit_parameter();
    CHECK(u.linear == orig.linear);
    CHECK(u.nonlinear == orig.nonlinear);
  }
}

TEST_CASE("embedding A eigenstructure") {
  auto a = build_embedding(Embedding::A).linear;
  auto es = eigen_structure(a);
  CHECK(es.exact);
  CHECK(es.diagonalisable);
  auto spec = es.spectrum;
  std::sort(spec.begin(), spec.end());
  CHECK(spec == std::vector<double>{-2.0 / 3, 0.0, 0.0, 2.0 / 3});
  CHECK(es.max_residual(a) <= 1e-12);

  bool found = false;
  for (const auto& p : es.pairs) {
    if (!p.exact_value || *p.exact_value != q(2, 3)) continue;
    REQUIRE(p.exact_vector);
    const auto& v = *p.exact_vector;
    // parallel to (-3/2, 3/2, 0, 1)
    std::vector<Rational> ref{q(-3, 2), q(3, 2), q(0), q(1)};
    Rational k = v[3];
    REQUIRE(k != 0);
    for (int i = 0; i < 4; ++i) CHECK(v[i] == ref[i] * k);
    found = true;
  }
  CHECK(found);
  auto ev = numeric_eigenvalues(a);
  CHECK(ev[3] == doctest::Approx(2.0 / 3).epsilon(1e-10));
}

TEST_CASE("embedding B has an irrational spectrum at zero parameter") {
  auto es = eigen_structure(build_embedding(Embedding::B).linear);
  CHECK_FALSE(es.exact);
  CHECK(es.max_residual(build_embedding(Embedding::B).linear) <= 1e-12);
}

TEST_CASE("coordinate map") {
  auto m = coordinate_map();
  CHECK(m.matrix * m.inverse == DenseMatrix<Rational>::identity(4));
  CHECK(m.inverse * m.matrix == DenseMatrix<Rational>::identity(4));
  CHECK(m.matrix(0, 0) == q(1, 2));
  CHECK(m.matrix(2, 3) == q(9, 8));
  CHECK(m.matrix(3, 2) == q(9, 8));
  // Slow columns of the inverse give a = s1 - s2 + ..., b = s1 + s2 + ...; the
  // fast columns differ from the transform's s3, s4 coefficients, which are
  // eigenvectors of the embedded matrix instead.
  CHECK(m.inverse(0, 0) == 1);
  CHECK(m.inverse(0, 1) == -1);
  CHECK(m.inverse(1, 0) == 1);
  CHECK(m.inverse(1, 1) == 1);
  CHECK(m.inverse(0, 2) == q(2, 3));

  // rows 3 and 4 are left eigenvectors of the embedded matrix
  auto a = build_embedding(Embedding::A).linear;
  auto lam = std::array<Rational, 2>{q(-2, 3), q(2, 3)};
  for (int r = 0; r < 2; ++r)
    for (int j = 0; j < 4; ++j) {
      Rational s = 0;
      for (int i = 0; i < 4; ++i) s += m.matrix(2 + r, i) * a(i, j);
      CHECK(s == lam[r] * m.matrix(2 + r, j));
    }
}

TEST_CASE("system text round trip") {
  for (const auto& sys : {build_original(), build_embedding(Embedding::A), build_embedding(Embedding::B)}) {
    std::stringstream ss;
    write_system(ss, sys);
    auto back = read_system(ss);
    CHECK(back == sys);
  }
}

TEST_CASE("normal form construction refuses the original system") {
  CHECK_THROWS_AS(construct(build_original(), coordinate_map()), ConstructionRefused);
}

TEST_CASE("rational root finding and polynomial evaluation") {
  // (x - 1/2)^2 (x + 3) (x^2 + 1)
  std::vector<Rational> p{q(3, 4), q(-11, 4), q(11, 4), q(-7, 4), q(2), q(1)};
  std::vector<Rational> rem;
  auto r = rational_roots(p, &rem);
  std::sort(r.begin(), r.end());
  CHECK(r == std::vector<Rational>{q(-3), q(1, 2), q(1, 2)});
  CHECK(rem == std::vector<Rational>{1, 0, 1});
  CHECK(evaluate_polynomial(p, q(1, 2)) == 0);
  CHECK(evaluate_polynomial(p, q(0)) == q(3, 4));
}
