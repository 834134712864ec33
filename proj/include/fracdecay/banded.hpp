#pragma once

// Square banded matrices and their direct solvers.

#include <cstddef>
#include <vector>

namespace fracdecay {

class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + kl_ >= i && j <= i + ku_;
  }
  /// Entry (i, j); zero outside the band.
  double get(std::size_t i, std::size_t j) const;
  /// Reference to an entry inside the band.
  double& at(std::size_t i, std::size_t j) { return data_[i * width() + (j + kl_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * width() + (j + kl_ - i)]; }

  std::vector<double> multiply(const std::vector<double>& x) const;
  std::vector<std::vector<double>> dense() const;
  bool diagonally_dominant() const;  // strict or weak in every row, strict in one

 private:
  std::size_t width() const { return kl_ + ku_ + 1; }
  std::size_t n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<double> data_;
};

enum class BandedMethod { Thomas, BandedLU, PivotedLU };

struct BandedSolution {
  std::vector<double> x;
  BandedMethod method = BandedMethod::BandedLU;
  double relative_residual = 0.0;
};

/// Solves A x = rhs: Thomas for tridiagonal dominant systems, banded LU
/// without pivoting for diagonally dominant ones, partial pivoting otherwise.
/// Throws NumericalError on a (numerically) singular matrix.
BandedSolution banded_solve(const BandedMatrix& A, const std::vector<double>& rhs);

struct GershgorinDisk {
  double center;
  double radius;
};
std::vector<GershgorinDisk> gershgorin_disks(const BandedMatrix& A);

}  // namespace fracdecay
