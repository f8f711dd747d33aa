#pragma once

#include <filesystem>
#include <iosfwd>

#include "ccm/matrix.hpp"

namespace ccm {

// CMX1 layout: the 4 magic bytes "CMX1", rows and cols as little-endian
// uint64, then rows*cols little-endian IEEE-754 doubles in row-major order.
void write_cmx(std::ostream& out, const Matrix& m);
Matrix read_cmx(std::istream& in);
void write_cmx(const std::filesystem::path& path, const Matrix& m);
Matrix read_cmx(const std::filesystem::path& path);

// CSV layout: first line "rows,cols", then one comma-separated line per row.
// Values are written with shortest round-trip formatting.
void write_csv(std::ostream& out, const Matrix& m);
Matrix read_csv(std::istream& in);
void write_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv(const std::filesystem::path& path);

}  // namespace ccm
