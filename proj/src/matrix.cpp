#include "ccm/matrix.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "ccm/error.hpp"
#include "ccm/rng.hpp"

namespace ccm {

namespace {

void require_nonempty(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be at least 1x1, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  require_nonempty(rows, cols);
  data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_nonempty(rows, cols);
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::filled(std::size_t rows, std::size_t cols, double value) {
  Matrix m(rows, cols);
  for (double& v : m.data_) v = value;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

Matrix& Matrix::add_scaled(const Matrix& other, double scale) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += scale * other.data_[i];
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double scale, Matrix a) { return a *= scale; }

double frobenius_norm(const Matrix& m) {
  double sum = 0.0;
  for (double v : m.data()) sum += v * v;
  return std::sqrt(sum);
}

double relative_error(const Matrix& got, const Matrix& want) {
  require_same_shape(got, want, "relative_error");
  const double diff = frobenius_norm(got - want);
  const double ref = frobenius_norm(want);
  return ref > 0.0 ? diff / ref : diff;
}

BlockGrid partition(const Matrix& m, std::size_t p, std::size_t q) {
  if (p == 0 || m.rows() % p != 0) {
    throw DimensionError("partition: rows (" + std::to_string(m.rows()) +
                         ") not divisible by " + std::to_string(p));
  }
  if (q == 0 || m.cols() % q != 0) {
    throw DimensionError("partition: cols (" + std::to_string(m.cols()) +
                         ") not divisible by " + std::to_string(q));
  }
  const std::size_t br = m.rows() / p;
  const std::size_t bc = m.cols() / q;
  BlockGrid grid{p, q, {}};
  grid.blocks.reserve(p * q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      Matrix block(br, bc);
      for (std::size_t r = 0; r < br; ++r)
        for (std::size_t c = 0; c < bc; ++c)
          block(r, c) = m(i * br + r, j * bc + c);
      grid.blocks.push_back(std::move(block));
    }
  }
  return grid;
}

Matrix assemble(const BlockGrid& grid) {
  if (grid.grid_rows == 0 || grid.grid_cols == 0 ||
      grid.blocks.size() != grid.grid_rows * grid.grid_cols) {
    throw DimensionError("assemble: grid is empty or has the wrong block count");
  }
  const std::size_t br = grid.blocks.front().rows();
  const std::size_t bc = grid.blocks.front().cols();
  for (const Matrix& b : grid.blocks) {
    if (b.rows() != br || b.cols() != bc) {
      throw DimensionError("assemble: ragged blocks (" +
                           std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()) + " vs " +
                           std::to_string(br) + "x" + std::to_string(bc) +
                           ")");
    }
  }
  Matrix out(br * grid.grid_rows, bc * grid.grid_cols);
  for (std::size_t i = 0; i < grid.grid_rows; ++i)
    for (std::size_t j = 0; j < grid.grid_cols; ++j) {
      const Matrix& b = grid.at(i, j);
      for (std::size_t r = 0; r < br; ++r)
        for (std::size_t c = 0; c < bc; ++c)
          out(i * br + r, j * bc + c) = b(r, c);
    }
  return out;
}

FlopCount transpose_product_flops(std::uint64_t r, std::uint64_t t,
                                  std::uint64_t w) {
  return FlopCount{r * w * (2 * t - 1)};
}

Product direct_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("direct_product: A has " + std::to_string(a.rows()) +
                         " rows but B has " + std::to_string(b.rows()));
  }
  const std::size_t t = a.rows();
  const std::size_t r = a.cols();
  const std::size_t w = b.cols();
  // Columns of A and B become contiguous rows; the k-loop order is unchanged.
  const Matrix at = a.transposed();
  const Matrix bt = b.transposed();
  Matrix out(r, w);
  for (std::size_t i = 0; i < r; ++i) {
    const auto ai = at.row(i);
    for (std::size_t j = 0; j < w; ++j) {
      const auto bj = bt.row(j);
      double sum = 0.0;
      for (std::size_t k = 0; k < t; ++k) sum += ai[k] * bj[k];
      out(i, j) = sum;
    }
  }
  return Product{std::move(out), transpose_product_flops(r, t, w)};
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                     const Distribution& dist) {
  Matrix m(rows, cols);
  SplitMix64 rng(seed);
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, UniformDist>) {
          if (!(d.high >= d.low))
            throw ConfigError("uniform distribution requires high >= low");
          for (double& v : m.data()) v = rng.uniform(d.low, d.high);
        } else {
          if (!(d.stddev >= 0.0))
            throw ConfigError("gaussian distribution requires stddev >= 0");
          for (double& v : m.data()) v = rng.gaussian(d.mean, d.stddev);
        }
      },
      dist);
  return m;
}

}  // namespace ccm
