#include "spde2d/io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>

#include "spde2d/errors.hpp"

namespace spde2d {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'D', 'E', '2', 'D', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> bytes;
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes;
    in.read(reinterpret_cast<char*>(bytes.data()), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

void put_f64_array(std::ostream& out, const std::vector<double>& xs) {
    for (double x : xs) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, 8);
        put_u64(out, bits);
    }
}

void get_f64_array(std::istream& in, std::vector<double>& xs) {
    for (double& x : xs) {
        const std::uint64_t bits = get_u64(in);
        std::memcpy(&x, &bits, 8);
    }
}

}  // namespace

void write_field(const FieldSample& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("io-error: cannot open " + path + " for writing");
    out.write(kMagic, 8);
    put_u64(out, field.n_times());
    put_u64(out, field.n_y());
    put_u64(out, field.n_z());
    put_f64_array(out, field.times);
    put_f64_array(out, field.ys);
    put_f64_array(out, field.zs);
    put_f64_array(out, field.values);
    if (!out) throw IoError("io-error: write failed for " + path);
}

FieldSample read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io-error: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw IoError("io-error: " + path + " is not an SPDE2D01 field file");

    FieldSample field;
    const std::uint64_t n_times = get_u64(in);
    const std::uint64_t n_y = get_u64(in);
    const std::uint64_t n_z = get_u64(in);
    if (!in || n_times == 0 || n_y == 0 || n_z == 0 ||
        n_times > (1ull << 40) || n_y > (1ull << 40) || n_z > (1ull << 40) ||
        n_times * n_y * n_z > (1ull << 40))
        throw IoError("io-error: " + path + " has implausible dimensions");

    field.times.resize(n_times);
    field.ys.resize(n_y);
    field.zs.resize(n_z);
    field.values.resize(n_times * n_y * n_z);
    get_f64_array(in, field.times);
    get_f64_array(in, field.ys);
    get_f64_array(in, field.zs);
    get_f64_array(in, field.values);
    if (!in) throw IoError("io-error: " + path + " is truncated");
    return field;
}

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_field_csv(const FieldSample& field, std::ostream& out) {
    out << "t,y,z,value\n";
    for (std::size_t i = 0; i < field.n_times(); ++i)
        for (std::size_t j = 0; j < field.n_y(); ++j)
            for (std::size_t k = 0; k < field.n_z(); ++k)
                out << format_double(field.times[i]) << ',' << format_double(field.ys[j])
                    << ',' << format_double(field.zs[k]) << ','
                    << format_double(field.value(i, j, k)) << '\n';
}

void write_field_csv(const FieldSample& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("io-error: cannot open " + path + " for writing");
    write_field_csv(field, out);
    if (!out) throw IoError("io-error: write failed for " + path);
}

}  // namespace spde2d
