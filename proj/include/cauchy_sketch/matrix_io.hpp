#pragma once

#include <filesystem>
#include <iosfwd>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch::io {

enum class MatrixFormat { Csv, Binary };

/// CSV layout: header line "rows,cols", then one comma-separated row per line.
DenseMatrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const DenseMatrix& m);

/// Binary layout: magic "CSKM", uint32 version (1), uint64 rows, uint64 cols,
/// then rows*cols IEEE-754 doubles, row-major. All integers and doubles are
/// little-endian.
DenseMatrix read_binary(std::istream& in);
void write_binary(std::ostream& out, const DenseMatrix& m);

/// Sniffs the magic bytes to pick the format.
DenseMatrix read_matrix(const std::filesystem::path& path);

/// ".bin" and ".cskm" extensions select the binary format, anything else CSV.
MatrixFormat format_for(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

}  // namespace cauchy_sketch::io
