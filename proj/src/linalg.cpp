#include "tvopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvopt/errors.hpp"

namespace tvopt {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "vector add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "vector subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(const Vector& v) {
  // scaled to avoid overflow on the large-magnitude tracking problem
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double r = x / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), data_() {
  data_.reserve(n_ * n_);
  for (const auto& row : rows) {
    require_same_size(row.size(), n_, "matrix row");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector SymMatrix::operator*(const Vector& v) const {
  require_same_size(n_, v.size(), "matrix-vector product");
  Vector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  require_same_size(n_, other.n_, "matrix add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  require_same_size(n_, other.n_, "matrix subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double SymMatrix::asymmetry() const {
  double scale = 1.0;
  for (double v : data_) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst / scale;
}

bool SymMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

void add_outer(SymMatrix& m, const Vector& a, double s) {
  require_same_size(m.size(), a.size(), "outer product");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) += s * a[i] * a[j];
}

Vector spd_solve(const SymMatrix& a, const Vector& b) {
  const std::size_t n = a.size();
  require_same_size(n, b.size(), "spd_solve");
  if (!a.all_finite() || !b.all_finite()) {
    throw Error(ErrorCode::NonFinite, "spd_solve received non-finite input");
  }

  // Lower-triangular factor, row-major; only the lower triangle of `a` is read.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag >= kSpdEpsilon)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(diag) + " at column " + std::to_string(j));
    }
    const double ljj = std::sqrt(diag);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = a(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = acc / ljj;
    }
  }

  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[i];
    for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * y[k];
    y[i] = acc / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * y[k];
    y[ii] = acc / l[ii * n + ii];
  }
  return y;
}

namespace {

EigenBounds jacobi_eigen_bounds(const SymMatrix& input) {
  const std::size_t n = input.size();
  SymMatrix a = input;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  EigenBounds out{a(0, 0), a(0, 0)};
  for (std::size_t i = 1; i < n; ++i) {
    out.min = std::min(out.min, a(i, i));
    out.max = std::max(out.max, a(i, i));
  }
  return out;
}

}  // namespace

EigenBounds eig_bounds(const SymMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "eig_bounds of an empty matrix");
  if (n == 1) return {a(0, 0), a(0, 0)};
  if (n == 2) {
    const double off = 0.5 * (a(0, 1) + a(1, 0));
    const double mean = 0.5 * (a(0, 0) + a(1, 1));
    const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
    const double radius = std::hypot(half_diff, off);
    return {mean - radius, mean + radius};
  }
  return jacobi_eigen_bounds(a);
}

double spectral_norm(const SymMatrix& a) {
  const EigenBounds e = eig_bounds(a);
  return std::max(std::abs(e.min), std::abs(e.max));
}

}  // namespace tvopt
