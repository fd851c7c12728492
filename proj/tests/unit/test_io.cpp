#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spde2d/errors.hpp"
#include "spde2d/io.hpp"
#include "spde2d/rng.hpp"

using namespace spde2d;

namespace {

FieldSample make_field(std::size_t nt, std::size_t ny, std::size_t nz, std::uint64_t key) {
    FieldSample f;
    f.times.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) f.times[i] = static_cast<double>(i) / (nt - 1);
    f.ys.resize(ny);
    for (std::size_t j = 0; j < ny; ++j) f.ys[j] = 0.1 + 0.8 * j / (ny - 1);
    f.zs.resize(nz);
    for (std::size_t k = 0; k < nz; ++k) f.zs[k] = 0.1 + 0.8 * k / (nz - 1);
    f.values.resize(nt * ny * nz);
    GaussianStream g(key);
    for (double& v : f.values) v = g.next();
    return f;
}

struct TempFile {
    std::string path;
    explicit TempFile(const char* name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("field round-trips bitwise through SPDE2D01") {
    TempFile tmp("spde2d_io_roundtrip.spde");
    for (std::uint64_t key = 1; key <= 3; ++key) {
        const FieldSample f = make_field(3 + key, 2 + key, 5, stream_key(key, 0, 1, 1));
        write_field(f, tmp.path);
        const FieldSample g = read_field(tmp.path);
        CHECK(g.times == f.times);
        CHECK(g.ys == f.ys);
        CHECK(g.zs == f.zs);
        CHECK(g.values == f.values);
    }
}

TEST_CASE("SPDE2D01 header layout") {
    TempFile tmp("spde2d_io_header.spde");
    const FieldSample f = make_field(2, 3, 4, stream_key(7, 0, 1, 1));
    write_field(f, tmp.path);

    std::ifstream in(tmp.path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    CHECK(std::string(magic, 8) == "SPDE2D01");
    unsigned char dims[24];
    in.read(reinterpret_cast<char*>(dims), 24);
    // little-endian u64 dims
    CHECK(dims[0] == 2);
    CHECK(dims[8] == 3);
    CHECK(dims[16] == 4);
    for (int i : {1, 2, 3, 4, 5, 6, 7}) {
        CHECK(dims[i] == 0);
        CHECK(dims[8 + i] == 0);
        CHECK(dims[16 + i] == 0);
    }
}

TEST_CASE("read_field rejects garbage") {
    TempFile tmp("spde2d_io_bad.spde");
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "NOTAFIELDFILE";
    }
    CHECK_THROWS_AS(read_field(tmp.path), IoError);

    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "SPDE2D01";  // header only, truncated
    }
    CHECK_THROWS_AS(read_field(tmp.path), IoError);

    CHECK_THROWS_AS(read_field("/nonexistent/path/x.spde"), IoError);
}

TEST_CASE("CSV export shape and round-trip parse of one row") {
    FieldSample f = make_field(2, 2, 2, stream_key(3, 0, 1, 1));
    std::ostringstream out;
    write_field_csv(f, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,y,z,value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 8);
}

TEST_CASE("format_double round-trips shortest decimal") {
    for (double v : {0.1, 1.0 / 3.0, -19.5, 4.04784176043574e-5, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(20240801.0) == "20240801");
}
