#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace ccm {

/// Dense row-major matrix of doubles. Both dimensions are at least one.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix filled(std::size_t rows, std::size_t cols, double value);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix transposed() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scale);
  /// this += scale * other
  Matrix& add_scaled(const Matrix& other, double scale);

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double scale, Matrix a);

double frobenius_norm(const Matrix& m);
/// ||got - want||_F / ||want||_F, or the absolute error when want is zero.
double relative_error(const Matrix& got, const Matrix& want);

/// p x q grid of equally shaped blocks, stored in row-major block order.
struct BlockGrid {
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
  std::vector<Matrix> blocks;

  const Matrix& at(std::size_t i, std::size_t j) const {
    return blocks[i * grid_cols + j];
  }
};

BlockGrid partition(const Matrix& m, std::size_t p, std::size_t q);
Matrix assemble(const BlockGrid& grid);

struct FlopCount {
  std::uint64_t flops = 0;
  friend bool operator==(FlopCount, FlopCount) = default;
};

/// Flops to form A^T B with A (t x r) and B (t x w): r * w * (2t - 1).
FlopCount transpose_product_flops(std::uint64_t r, std::uint64_t t,
                                  std::uint64_t w);

struct Product {
  Matrix value;
  FlopCount flops;
};

/// A^T B, summed in index order along the shared dimension.
Product direct_product(const Matrix& a, const Matrix& b);

struct UniformDist {
  double low = 0.0;
  double high = 1.0;
};
struct GaussianDist {
  double mean = 0.0;
  double stddev = 1.0;
};
using Distribution = std::variant<UniformDist, GaussianDist>;

/// Deterministic for fixed (seed, dist, shape); entries are drawn row-major
/// from a SplitMix64 stream seeded with `seed`.
Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                     const Distribution& dist = UniformDist{-1.0, 1.0});

}  // namespace ccm
