#include "msbc/spatial/eigen_structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace msbc {
namespace {

DenseMatrix<double> to_double(const DenseMatrix<Rational>& a) {
  DenseMatrix<double> d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d(i, j) = a(i, j).get_d();
  return d;
}

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  if (n == 0) return out;
  if (n > mpz_class("1000000000000")) return out;  // not worth enumerating
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Divide poly by (x - r); poly lowest degree first.
std::vector<Rational> deflate(const std::vector<Rational>& poly, const Rational& r) {
  const std::size_t n = poly.size() - 1;
  std::vector<Rational> q(n);
  Rational carry = 0;
  for (std::size_t k = n; k-- > 0;) {
    carry = poly[k + 1] + carry * r;
    q[k] = carry;
  }
  return q;
}

void trim(std::vector<Rational>& p) {
  while (p.size() > 1 && sgn(p.back()) == 0) p.pop_back();
}

}  // namespace

std::vector<Rational> characteristic_polynomial(const DenseMatrix<Rational>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw StructuralError("characteristic polynomial of a non-square matrix");
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  DenseMatrix<Rational> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    auto am = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(long(k));
  }
  return c;
}

Rational evaluate_polynomial(const std::vector<Rational>& poly, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = poly.size(); k-- > 0;) acc = acc * x + poly[k];
  return acc;
}

std::vector<Rational> rational_roots(std::vector<Rational> poly, std::vector<Rational>* remainder) {
  trim(poly);
  std::vector<Rational> roots;
  while (poly.size() > 1 && sgn(poly[0]) == 0) {
    roots.push_back(0);
    poly.erase(poly.begin());
  }
  bool found = true;
  while (found && poly.size() > 1) {
    found = false;
    mpz_class lcm = 1;
    for (const auto& c : poly) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_class lead = Rational(poly.back() * lcm).get_num(), tail = Rational(poly.front() * lcm).get_num();
    for (const auto& p : divisors(tail)) {
      for (const auto& q : divisors(lead)) {
        for (int sign : {1, -1}) {
          Rational r(sign * p, q);
          r.canonicalize();
          if (sgn(evaluate_polynomial(poly, r)) == 0) {
            roots.push_back(r);
            poly = deflate(poly, r);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
  }
  std::sort(roots.begin(), roots.end());
  if (remainder) *remainder = poly;
  return roots;
}

double EigenStructure::max_residual(const DenseMatrix<Rational>& a) const {
  auto d = to_double(a);
  double worst = 0.0;
  for (const auto& p : pairs) {
    auto av = d.apply(p.vector);
    for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, std::fabs(av[i] - p.value * p.vector[i]));
  }
  return worst;
}

EigenStructure eigen_structure(const DenseMatrix<Rational>& a) {
  const std::size_t n = a.rows();
  EigenStructure es;
  es.characteristic = characteristic_polynomial(a);
  std::vector<Rational> rest;
  auto roots = rational_roots(es.characteristic, &rest);

  std::size_t independent = 0;
  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i;
    while (j < roots.size() && roots[j] == roots[i]) ++j;
    auto shifted = a;
    for (std::size_t k = 0; k < n; ++k) shifted(k, k) -= roots[i];
    for (auto& v : shifted.kernel()) {
      Eigenpair p;
      p.value = roots[i].get_d();
      p.exact_value = roots[i];
      for (const auto& x : v) p.vector.push_back(x.get_d());
      p.exact_vector = std::move(v);
      es.pairs.push_back(std::move(p));
      ++independent;
    }
    for (std::size_t k = i; k < j; ++k) es.spectrum.push_back(roots[i].get_d());
    i = j;
  }

  es.exact = rest.size() == 1;
  if (!es.exact) {
    // Remaining roots from the companion matrix of the deflated polynomial.
    const std::size_t r = rest.size() - 1;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t k = 0; k < r; ++k) {
      comp(0, k) = -Rational(rest[r - 1 - k] / rest[r]).get_d();
      if (k + 1 < r) comp(k + 1, k) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
    std::vector<double> extra;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      auto z = solver.eigenvalues()(k);
      if (std::fabs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z))) es.real = false;
      extra.push_back(z.real());
    }
    std::sort(extra.begin(), extra.end());
    auto d = to_double(a);
    for (std::size_t k = 0; k < extra.size(); ++k) {
      double lam = extra[k];
      es.spectrum.push_back(lam);
      if (!es.real || (k > 0 && std::fabs(extra[k - 1] - lam) < 1e-9)) continue;
      auto shifted = d;
      for (std::size_t k = 0; k < n; ++k) shifted(k, k) -= lam;
      auto ker = shifted.kernel(1e-9);
      for (auto& v : ker) {
        Eigenpair p;
        p.value = lam;
        p.vector = std::move(v);
        es.pairs.push_back(std::move(p));
        ++independent;
      }
    }
  }
  std::sort(es.spectrum.begin(), es.spectrum.end());
  es.diagonalisable = es.real && independent == n;
  return es;
}

}  // namespace msbc
