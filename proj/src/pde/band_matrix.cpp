#include "msbc/pde/band_matrix.hpp"

#include <algorithm>

#include "msbc/errors.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info);
}

namespace msbc {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(std::size_t(ld_) * n, 0.0), ipiv_(n, 0) {}

void BandMatrix::zero() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factored_ = false;
}

void BandMatrix::set(int i, int j, double v) {
  if (!in_band(i, j)) {
    if (v != 0.0) throw StructuralError("band matrix: entry outside the band");
    return;
  }
  at(i, j) = v;
}

void BandMatrix::add(int i, int j, double v) {
  if (!in_band(i, j)) {
    if (v != 0.0) throw StructuralError("band matrix: entry outside the band");
    return;
  }
  at(i, j) += v;
}

double BandMatrix::get(int i, int j) const { return in_band(i, j) ? at(i, j) : 0.0; }

void BandMatrix::scale_shift(double alpha, double beta) {
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) at(i, j) *= alpha;
  for (int i = 0; i < n_; ++i) at(i, i) += beta;
}

std::vector<double> BandMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) y[i] += at(i, j) * x[j];
  return y;
}

bool BandMatrix::factorize() {
  int info = 0;
  dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ld_, ipiv_.data(), &info);
  if (info < 0) throw StructuralError("band matrix: dgbtrf rejected its arguments");
  factored_ = info == 0;
  return factored_;
}

void BandMatrix::solve(std::vector<double>& rhs) const {
  if (!factored_) throw StructuralError("band matrix: solve before a successful factorisation");
  int info = 0, nrhs = 1;
  const char trans = 'N';
  dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ld_, ipiv_.data(), rhs.data(), &n_, &info);
  if (info != 0) throw NumericalError("band matrix: dgbtrs failed");
}

}  // namespace msbc
