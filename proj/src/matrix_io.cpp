#include "ccm/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "ccm/error.hpp"

namespace ccm {

namespace {

constexpr std::array<char, 4> kMagic{'C', 'M', 'X', '1'};
// Guards against allocating absurd sizes from a corrupt header.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t i = 0; i < 8; ++i)
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("CMX1: truncated stream");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("could not format value");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw IoError("CSV line " + std::to_string(line) + ": bad number '" +
                  std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void write_cmx(std::ostream& out, const Matrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("CMX1: write failed");
}

Matrix read_cmx(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw IoError("CMX1: bad magic bytes");
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (rows == 0 || cols == 0 || rows > kMaxElements / cols) {
    throw IoError("CMX1: invalid dimensions " + std::to_string(rows) + "x" +
                  std::to_string(cols));
  }
  std::vector<double> data(rows * cols);
  for (double& v : data) v = std::bit_cast<double>(get_u64(in));
  return Matrix(rows, cols, std::move(data));
}

void write_cmx(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_cmx(out, m);
}

Matrix read_cmx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_cmx(in);
}

void write_csv(std::ostream& out, const Matrix& m) {
  out << m.rows() << ',' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  if (!out) throw IoError("CSV: write failed");
}

Matrix read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("CSV: missing header");
  const auto header = split_commas(line);
  if (header.size() != 2) throw IoError("CSV: header must be 'rows,cols'");
  const double rows_d = parse_double(header[0], 1);
  const double cols_d = parse_double(header[1], 1);
  if (rows_d < 1 || cols_d < 1 || rows_d != static_cast<std::uint64_t>(rows_d) ||
      cols_d != static_cast<std::uint64_t>(cols_d)) {
    throw IoError("CSV: header dimensions must be positive integers");
  }
  const auto rows = static_cast<std::size_t>(rows_d);
  const auto cols = static_cast<std::size_t>(cols_d);
  std::vector<double> data;
  data.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw IoError("CSV: expected " + std::to_string(rows) + " data rows");
    const auto fields = split_commas(line);
    if (fields.size() != cols) {
      throw IoError("CSV line " + std::to_string(r + 2) + ": expected " +
                    std::to_string(cols) + " values");
    }
    for (auto f : fields) data.push_back(parse_double(f, r + 2));
  }
  return Matrix(rows, cols, std::move(data));
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(out, m);
}

Matrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace ccm
