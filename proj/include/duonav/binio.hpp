#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "duonav/error.hpp"

// Little-endian scalar IO for the dataset and checkpoint containers. The
// project targets little-endian hosts; loaders validate magic bytes, so a
// foreign-endian file fails loudly rather than silently.
namespace duonav::binio {

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) raise(ErrorCode::parse, "unexpected end of binary stream");
    return v;
}

inline void write_u32(std::ostream& os, uint32_t v) { write_pod(os, v); }
inline void write_u64(std::ostream& os, uint64_t v) { write_pod(os, v); }
inline void write_f64(std::ostream& os, double v) { write_pod(os, v); }
inline uint32_t read_u32(std::istream& is) { return read_pod<uint32_t>(is); }
inline uint64_t read_u64(std::istream& is) { return read_pod<uint64_t>(is); }
inline double read_f64(std::istream& is) { return read_pod<double>(is); }

template <typename T>
void write_vec(std::ostream& os, const std::vector<T>& v) {
    write_u32(os, static_cast<uint32_t>(v.size()));
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
std::vector<T> read_vec(std::istream& is, uint32_t max_len = 1u << 26) {
    uint32_t n = read_u32(is);
    if (n > max_len) raise(ErrorCode::parse, "binary vector length out of range");
    std::vector<T> v(n);
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(T)));
    if (!is) raise(ErrorCode::parse, "unexpected end of binary stream");
    return v;
}

inline void expect_magic(std::istream& is, const char (&magic)[5], const char* what) {
    char buf[4];
    is.read(buf, 4);
    if (!is || std::memcmp(buf, magic, 4) != 0)
        raise(ErrorCode::parse, std::string(what) + ": bad magic bytes");
}

}  // namespace duonav::binio
