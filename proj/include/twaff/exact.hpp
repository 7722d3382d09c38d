#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace twaff {

using Rational = boost::rational<std::int64_t>;
using QVector = std::vector<Rational>;

/// Dense row-major rational matrix. Only what root-system code needs.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QMatrix operator*(const QMatrix& other) const;
  QVector operator*(const QVector& v) const;
  bool operator==(const QMatrix& other) const = default;

  QMatrix transpose() const;
  Rational determinant() const;
  /// Throws std::domain_error when singular.
  QMatrix inverse() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator-(const QVector& a);
QVector operator*(const Rational& s, const QVector& a);
bool is_zero(const QVector& v);

/// a^T F b
Rational bilinear(const QMatrix& form, const QVector& a, const QVector& b);

/// Solve A x = b exactly; A square and invertible.
QVector solve(const QMatrix& a, const QVector& b);

std::vector<double> to_double(const QVector& v);
double to_double(const Rational& q);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

}  // namespace twaff
