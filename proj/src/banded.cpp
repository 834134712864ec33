#include "fracdecay/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdecay/errors.hpp"

namespace fracdecay {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), data_(n * (lower + upper + 1), 0.0) {}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || !in_band(i, j)) return 0.0;
  return at(i, j);
}

std::vector<double> BandedMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i >= kl_ ? i - kl_ : 0, j1 = std::min(n_ - 1, i + ku_);
    double s = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) s += at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<std::vector<double>> BandedMatrix::dense() const {
  std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) d[i][j] = get(i, j);
  return d;
}

bool BandedMatrix::diagonally_dominant() const {
  bool strict = false;
  for (const auto& disk : gershgorin_disks(*this)) {
    const double excess = std::fabs(disk.center) - disk.radius;
    if (excess < 0.0) return false;
    if (excess > 0.0) strict = true;
  }
  return strict;
}

std::vector<GershgorinDisk> gershgorin_disks(const BandedMatrix& A) {
  const std::size_t n = A.size();
  std::vector<GershgorinDisk> disks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i >= A.lower() ? i - A.lower() : 0;
    const std::size_t j1 = std::min(n - 1, i + A.upper());
    double r = 0.0;
    for (std::size_t j = j0; j <= j1; ++j)
      if (j != i) r += std::fabs(A.at(i, j));
    disks[i] = {A.at(i, i), r};
  }
  return disks;
}

namespace {

[[noreturn]] void singular(std::size_t row, double pivot) {
  std::ostringstream os;
  os << "banded_solve: numerically singular matrix (pivot " << pivot << " in row " << row << ")";
  throw NumericalError(os.str());
}

double pivot_floor(const BandedMatrix& A) {
  double m = 0.0;
  for (const auto& d : gershgorin_disks(A)) m = std::max(m, std::fabs(d.center) + d.radius);
  return m * 1e3 * std::numeric_limits<double>::epsilon();
}

std::vector<double> thomas(const BandedMatrix& A, const std::vector<double>& rhs) {
  const std::size_t n = A.size();
  const double floor = pivot_floor(A);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  double b = A.at(0, 0);
  if (std::fabs(b) <= floor) singular(0, b);
  if (n > 1) c[0] = A.at(0, 1) / b;
  d[0] = rhs[0] / b;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = A.at(i, i - 1);
    b = A.at(i, i) - a * c[i - 1];
    if (std::fabs(b) <= floor) singular(i, b);
    if (i + 1 < n) c[i] = A.at(i, i + 1) / b;
    d[i] = (rhs[i] - a * d[i - 1]) / b;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

// LU on a dense band copy of width kl + (ku + kl), optionally with row swaps.
std::vector<double> band_lu(const BandedMatrix& A, const std::vector<double>& rhs, bool pivot) {
  const std::size_t n = A.size(), kl = A.lower();
  const std::size_t ku = pivot ? A.upper() + kl : A.upper();
  const std::size_t w = kl + ku + 1;
  auto idx = [&](std::size_t i, std::size_t j) { return i * w + (j + kl - i); };
  std::vector<double> m(n * w, 0.0), x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i >= kl ? i - kl : 0, j1 = std::min(n - 1, i + A.upper());
    for (std::size_t j = j0; j <= j1; ++j) m[idx(i, j)] = A.at(i, j);
  }
  const double floor = pivot_floor(A);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last = std::min(n - 1, k + kl);
    if (pivot) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i <= last; ++i)
        if (std::fabs(m[idx(i, k)]) > std::fabs(m[idx(p, k)])) p = i;
      if (p != k) {
        // p <= k + kl, so columns k..k+ku lie inside both rows of the widened band
        for (std::size_t j = k; j <= std::min(n - 1, k + ku); ++j)
          std::swap(m[idx(k, j)], m[idx(p, j)]);
        std::swap(x[k], x[p]);
      }
    }
    const double piv = m[idx(k, k)];
    if (std::fabs(piv) <= floor) singular(k, piv);
    const std::size_t jl = std::min(n - 1, k + ku);
    for (std::size_t i = k + 1; i <= last; ++i) {
      const double f = m[idx(i, k)] / piv;
      if (f == 0.0) continue;
      m[idx(i, k)] = 0.0;
      for (std::size_t j = k + 1; j <= jl; ++j) m[idx(i, j)] -= f * m[idx(k, j)];
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    const std::size_t jl = std::min(n - 1, k + ku);
    for (std::size_t j = k + 1; j <= jl; ++j) s -= m[idx(k, j)] * x[j];
    x[k] = s / m[idx(k, k)];
  }
  return x;
}

double relative_residual(const BandedMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& rhs) {
  const std::vector<double> ax = A.multiply(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    num = std::max(num, std::fabs(ax[i] - rhs[i]));
    den = std::max(den, std::fabs(rhs[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace

BandedSolution banded_solve(const BandedMatrix& A, const std::vector<double>& rhs) {
  if (rhs.size() != A.size()) {
    std::ostringstream os;
    os << "banded_solve: rhs has " << rhs.size() << " entries for a " << A.size()
       << "-row matrix";
    throw DomainError(os.str());
  }
  BandedSolution s;
  if (A.size() == 0) return s;
  const bool dominant = A.diagonally_dominant();
  if (dominant && A.lower() <= 1 && A.upper() <= 1) {
    s.method = BandedMethod::Thomas;
    s.x = thomas(A, rhs);
  } else if (dominant) {
    s.method = BandedMethod::BandedLU;
    s.x = band_lu(A, rhs, false);
  } else {
    s.method = BandedMethod::PivotedLU;
    s.x = band_lu(A, rhs, true);
  }
  s.relative_residual = relative_residual(A, s.x, rhs);
  return s;
}

}  // namespace fracdecay
