#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/matrix_io.hpp"
#include "helpers.hpp"

using namespace cauchy_sketch;

TEST_CASE("csv round trip is exact") {
    const auto m = test_util::gaussian(7, 3, 11);
    std::stringstream ss;
    io::write_csv(ss, m);
    CHECK(io::read_csv(ss) == m);
}

TEST_CASE("csv parsing") {
    std::stringstream ss("2,2\n1,2\n3.5,-4e1\n");
    const auto m = io::read_csv(ss);
    CHECK(m == DenseMatrix(2, 2, {1, 2, 3.5, -40}));
    std::stringstream bad_header("2;2\n1,2\n");
    CHECK_THROWS_AS(io::read_csv(bad_header), ArgumentError);
    std::stringstream short_rows("3,1\n1\n2\n");
    CHECK_THROWS_AS(io::read_csv(short_rows), ArgumentError);
    std::stringstream wide("1,2\n1,2,3\n");
    CHECK_THROWS_AS(io::read_csv(wide), DimensionError);
    std::stringstream junk("1,1\nabc\n");
    CHECK_THROWS_AS(io::read_csv(junk), ArgumentError);
}

TEST_CASE("binary layout and round trip") {
    const DenseMatrix m(1, 2, {1.0, -2.0});
    std::stringstream ss;
    io::write_binary(ss, m);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 4 + 4 + 8 + 8 + 16);
    CHECK(bytes.substr(0, 4) == "CSKM");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);   // rows, little-endian
    CHECK(static_cast<unsigned char>(bytes[16]) == 2);  // cols
    double first;
    std::memcpy(&first, bytes.data() + 24, 8);
    CHECK(first == 1.0);
    std::stringstream in(bytes);
    CHECK(io::read_binary(in) == m);

    std::string corrupt = bytes;
    corrupt[0] = 'X';
    std::stringstream bad(corrupt);
    CHECK_THROWS_AS(io::read_binary(bad), ArgumentError);
    std::stringstream truncated(bytes.substr(0, 30));
    CHECK_THROWS_AS(io::read_binary(truncated), ArgumentError);
}

TEST_CASE("read_matrix sniffs the format from content") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto m = test_util::gaussian(5, 2, 12);
    const auto bin = dir / "cs_io_test.bin";
    const auto csv = dir / "cs_io_test.csv";
    io::write_matrix(bin, m);
    io::write_matrix(csv, m);
    CHECK(io::format_for(bin) == io::MatrixFormat::Binary);
    CHECK(io::format_for(csv) == io::MatrixFormat::Csv);
    CHECK(io::read_matrix(bin) == m);
    CHECK(io::read_matrix(csv) == m);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}
