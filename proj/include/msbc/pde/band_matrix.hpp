#pragma once

#include <vector>

namespace msbc {

// General band matrix in LAPACK storage, factorised in place by dgbtrf.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  void zero();
  // Entries outside the band are ignored for zero values and rejected otherwise.
  void set(int i, int j, double v);
  void add(int i, int j, double v);
  double get(int i, int j) const;
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

  // A := alpha A + beta I.
  void scale_shift(double alpha, double beta);
  std::vector<double> multiply(const std::vector<double>& x) const;

  // Returns false on an exactly singular pivot.
  bool factorize();
  void solve(std::vector<double>& rhs) const;

 private:
  double& at(int i, int j) { return ab_[std::size_t(j) * ld_ + (kl_ + ku_ + i - j)]; }
  double at(int i, int j) const { return ab_[std::size_t(j) * ld_ + (kl_ + ku_ + i - j)]; }

  int n_ = 0, kl_ = 0, ku_ = 0, ld_ = 1;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace msbc
