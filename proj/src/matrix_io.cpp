#include "cauchy_sketch/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cauchy_sketch/errors.hpp"

namespace cauchy_sketch::io {

namespace {

constexpr std::array<char, 4> kMagic{'C', 'S', 'K', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>) {
        bits = std::bit_cast<std::uint64_t>(value);
    } else {
        bits = static_cast<std::uint64_t>(value);
    }
    for (std::size_t k = 0; k < sizeof(T); ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
        throw ArgumentError("binary matrix: truncated input");
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
    if constexpr (std::is_same_v<T, double>) {
        return std::bit_cast<double>(bits);
    } else {
        return static_cast<T>(bits);
    }
}

std::size_t parse_count(std::string_view s) {
    std::size_t v = 0;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ArgumentError("csv matrix: bad dimension field '" + std::string(s) + "'");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ArgumentError("csv matrix: bad value '" + s + "'");
    }
    while (used < s.size() && (s[used] == ' ' || s[used] == '\r' || s[used] == '\t')) ++used;
    if (used != s.size()) throw ArgumentError("csv matrix: bad value '" + s + "'");
    return v;
}

}  // namespace

DenseMatrix read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ArgumentError("csv matrix: missing header");
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ArgumentError("csv matrix: header must be 'rows,cols'");
    const std::size_t rows = parse_count(std::string_view(line).substr(0, comma));
    const std::size_t cols = parse_count(std::string_view(line).substr(comma + 1));
    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw ArgumentError("csv matrix: fewer rows than declared");
        std::stringstream ss(line);
        std::string field;
        std::size_t count = 0;
        while (std::getline(ss, field, ',')) {
            data.push_back(parse_double(field));
            ++count;
        }
        if (count != cols)
            throw DimensionError("csv matrix: row " + std::to_string(i) + " has " +
                                 std::to_string(count) + " fields, expected " + std::to_string(cols));
    }
    return DenseMatrix(rows, cols, std::move(data));
}

void write_csv(std::ostream& out, const DenseMatrix& m) {
    out << m.rows() << ',' << m.cols() << '\n';
    std::array<char, 32> buf{};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j));
            out.write(buf.data(), ptr - buf.data());
        }
        out << '\n';
    }
}

DenseMatrix read_binary(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), 4) || magic != kMagic)
        throw ArgumentError("binary matrix: bad magic bytes");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kVersion)
        throw ArgumentError("binary matrix: unsupported version " + std::to_string(version));
    const auto rows = get_le<std::uint64_t>(in);
    const auto cols = get_le<std::uint64_t>(in);
    std::vector<double> data(rows * cols);
    for (double& x : data) x = get_le<double>(in);
    return DenseMatrix(rows, cols, std::move(data));
}

void write_binary(std::ostream& out, const DenseMatrix& m) {
    out.write(kMagic.data(), 4);
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint64_t>(out, m.rows());
    put_le<std::uint64_t>(out, m.cols());
    for (double x : m.data()) put_le<double>(out, x);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open " + path.string());
    std::array<char, 4> head{};
    in.read(head.data(), 4);
    const bool binary = in.gcount() == 4 && head == kMagic;
    in.clear();
    in.seekg(0);
    return binary ? read_binary(in) : read_csv(in);
}

MatrixFormat format_for(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return (ext == ".bin" || ext == ".cskm") ? MatrixFormat::Binary : MatrixFormat::Csv;
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path.string());
    if (format_for(path) == MatrixFormat::Binary) {
        write_binary(out, m);
    } else {
        write_csv(out, m);
    }
}

}  // namespace cauchy_sketch::io
