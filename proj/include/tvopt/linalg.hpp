#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace tvopt {

/// Dense real vector whose length is fixed at construction.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  bool all_finite() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
double distance(const Vector& a, const Vector& b);

/// Square symmetric matrix stored densely in row-major order.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const Vector& d);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  Vector operator*(const Vector& v) const;
  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  /// Max |a_ij - a_ji| relative to max(1, max |a_ij|).
  double asymmetry() const;
  bool all_finite() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

/// Rank-one update a·a^T scaled by s, added into m.
void add_outer(SymMatrix& m, const Vector& a, double s);

/// Smallest admissible Cholesky pivot; anything below means the matrix is
/// not (numerically) positive definite.
inline constexpr double kSpdEpsilon = 1e-10;

/// Solves A y = b for symmetric positive definite A by Cholesky factorization.
/// Throws Error(NotPositiveDefinite) when a pivot falls below kSpdEpsilon.
Vector spd_solve(const SymMatrix& a, const Vector& b);

struct EigenBounds {
  double min;
  double max;
};

/// Extreme eigenvalues of a symmetric matrix. Closed form for n <= 2,
/// cyclic Jacobi rotations otherwise.
EigenBounds eig_bounds(const SymMatrix& a);

/// Spectral norm of a symmetric matrix, max(|λ_min|, |λ_max|).
double spectral_norm(const SymMatrix& a);

}  // namespace tvopt
