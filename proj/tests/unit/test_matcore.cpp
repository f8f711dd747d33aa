#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccm/error.hpp"
#include "ccm/matrix.hpp"
#include "ccm/matrix_io.hpp"
#include "ccm/rng.hpp"
#include "oracles.hpp"

using namespace ccm;

TEST_CASE("matrix rejects empty shapes and mismatched data") {
  CHECK_THROWS_AS(Matrix(0, 3), DimensionError);
  CHECK_THROWS_AS(Matrix(2, 0), DimensionError);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("partition and assemble round trip bit-identically") {
  const Matrix m = random_matrix(12, 18, 7);
  for (std::size_t p : {1, 2, 3, 4, 6, 12})
    for (std::size_t q : {1, 2, 3, 6, 9, 18}) {
      const BlockGrid g = partition(m, p, q);
      CHECK(g.grid_rows == p);
      CHECK(g.grid_cols == q);
      CHECK(g.blocks.size() == p * q);
      CHECK(g.blocks.front().rows() == 12 / p);
      CHECK(g.blocks.front().cols() == 18 / q);
      CHECK(assemble(g) == m);
    }
}

TEST_CASE("partition places blocks in row-major block order") {
  Matrix m(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = 10.0 * r + c;
  const BlockGrid g = partition(m, 2, 2);
  CHECK(g.at(0, 1)(0, 0) == 2.0);
  CHECK(g.at(1, 0)(0, 0) == 20.0);
  CHECK(g.at(1, 1)(1, 1) == 33.0);
}

TEST_CASE("partition names the axis that does not divide") {
  const Matrix m(6, 4);
  try {
    partition(m, 4, 2);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("rows") != std::string::npos);
  }
  try {
    partition(m, 3, 3);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("cols") != std::string::npos);
  }
}

TEST_CASE("direct_product of identities counts rw(2t-1) flops") {
  const Product p = direct_product(Matrix::identity(2), Matrix::identity(2));
  CHECK(p.value == Matrix::identity(2));
  CHECK(p.flops.flops == 12);
  CHECK(transpose_product_flops(9000, 12000, 9000).flops ==
        std::uint64_t{9000} * 9000 * 23999);
}

TEST_CASE("direct_product matches the triple loop exactly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix a = random_matrix(3, 2, seed);
    const Matrix b = random_matrix(3, 4, seed + 100);
    CHECK(direct_product(a, b).value == oracle::triple_loop(a, b));
  }
  const Matrix a = random_matrix(37, 11, 1);
  const Matrix b = random_matrix(37, 5, 2);
  CHECK(direct_product(a, b).value == oracle::triple_loop(a, b));
  CHECK_THROWS_AS(direct_product(Matrix(3, 2), Matrix(4, 2)), DimensionError);
}

TEST_CASE("random_matrix is deterministic and validates its distribution") {
  CHECK(random_matrix(5, 7, 42) == random_matrix(5, 7, 42));
  CHECK_FALSE(random_matrix(5, 7, 42) == random_matrix(5, 7, 43));
  CHECK(random_matrix(3, 3, 9, UniformDist{0.0, 0.0}) == Matrix(3, 3));
  CHECK_THROWS_AS(random_matrix(2, 2, 0, UniformDist{1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(random_matrix(2, 2, 0, GaussianDist{0.0, -1.0}), ConfigError);
  const Matrix u = random_matrix(50, 50, 3, UniformDist{-2.0, 3.0});
  for (double v : u.data()) {
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
  }
}

TEST_CASE("gaussian sample mean lies within 5 sigma / sqrt(n) of zero") {
  const Matrix g = random_matrix(100, 100, 11, GaussianDist{0.0, 1.0});
  double sum = 0.0, sq = 0.0;
  for (double v : g.data()) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(g.size());
  CHECK(std::abs(sum / n) <= 5.0 / std::sqrt(n));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("splitmix streams are reproducible and split cleanly") {
  SplitMix64 a(123), b(123);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(split_seed(5, 0) != split_seed(5, 1));
  CHECK(split_seed(5, 0) != split_seed(6, 0));
  SplitMix64 r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform_open_low();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("CMX1 round trip and layout") {
  const Matrix m = random_matrix(3, 5, 8);
  std::stringstream buf;
  write_cmx(buf, m);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 4 + 16 + 15 * 8);
  CHECK(bytes.substr(0, 4) == "CMX1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 3);  // rows, little endian
  CHECK(static_cast<unsigned char>(bytes[12]) == 5);
  CHECK(read_cmx(buf) == m);

  std::stringstream bad("CMX2xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_cmx(bad), IoError);
  std::stringstream truncated(bytes.substr(0, 30));
  CHECK_THROWS_AS(read_cmx(truncated), IoError);
}

TEST_CASE("CSV round trip keeps every bit") {
  const Matrix m = random_matrix(4, 3, 21, GaussianDist{0.0, 1e6});
  std::stringstream buf;
  write_csv(buf, m);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "4,3");
  buf.seekg(0);
  CHECK(read_csv(buf) == m);
  std::stringstream bad("2,2\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(bad), IoError);
}
