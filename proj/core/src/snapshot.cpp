#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dsf/errors.hpp"
#include "dsf/oracle.hpp"

namespace dsf {

namespace {


template <typename T>
void put(std::ostream& os, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    os.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    char buf[sizeof(T)];
    if (!is.read(buf, sizeof(T))) throw ValidationError("snapshot: truncated file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void put_all(std::ostream& os, const std::vector<Complex>& v) {
    for (const auto& z : v) {
        put(os, z.real());
        put(os, z.imag());
    }
}

void get_all(std::istream& is, std::vector<Complex>& v, std::size_t n) {
    v.resize(n);
    for (auto& z : v) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        z = Complex(re, im);
    }
}

}  // namespace

void write_snapshot(const std::string& path, const OracleState& s) {
    const std::size_t M = s.modes();
    if (s.b[1].size() != M || s.c_pair.size() != M * (M - 1) / 2 || s.c_same.size() != M)
        throw ValidationError("snapshot: inconsistent state sizes");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("snapshot: cannot open " + path);
    put<std::uint64_t>(os, M);
    put(os, s.t);
    put(os, s.a.real());
    put(os, s.a.imag());
    put_all(os, s.b[0]);
    put_all(os, s.b[1]);
    put_all(os, s.c_pair);
    put_all(os, s.c_same);
    if (!os) throw ValidationError("snapshot: write failed for " + path);
}

OracleState read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("snapshot: cannot open " + path);
    OracleState s;
    const auto M = static_cast<std::size_t>(get<std::uint64_t>(is));
    if (M > (1u << 20)) throw ValidationError("snapshot: implausible mode count");
    s.t = get<double>(is);
    const double re = get<double>(is);
    const double im = get<double>(is);
    s.a = Complex(re, im);
    get_all(is, s.b[0], M);
    get_all(is, s.b[1], M);
    get_all(is, s.c_pair, M * (M - 1) / 2);
    get_all(is, s.c_same, M);
    return s;
}

}  // namespace dsf
