#include "aq/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace aq {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'Q', 'T', '1'};

void put_u32_le(std::ostream& os, std::uint32_t v) {
    const std::array<char, 4> b = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                                   char((v >> 24) & 0xff)};
    os.write(b.data(), b.size());
}

std::uint32_t get_u32_le(std::istream& is) {
    std::array<unsigned char, 4> b{};
    is.read(reinterpret_cast<char*>(b.data()), b.size());
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

} // namespace

void write_pqt(std::ostream& os, const ActivationTensor& t) {
    os.write(kMagic.data(), kMagic.size());
    const Shape4& s = t.shape();
    put_u32_le(os, s.n);
    put_u32_le(os, s.c);
    put_u32_le(os, s.h);
    put_u32_le(os, s.w);
    std::vector<char> payload(t.size() * 4);
    char* p = payload.data();
    for (float v : t.values()) {
        const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
        p[0] = char(u & 0xff);
        p[1] = char((u >> 8) & 0xff);
        p[2] = char((u >> 16) & 0xff);
        p[3] = char((u >> 24) & 0xff);
        p += 4;
    }
    os.write(payload.data(), std::streamsize(payload.size()));
    if (!os) {
        throw IoError("short write while serializing tensor");
    }
}

void write_pqt(const std::string& path, const ActivationTensor& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_pqt(f, t);
    f.flush();
    if (!f) {
        throw IoError("write failed for '" + path + "'");
    }
}

ActivationTensor read_pqt(std::istream& is) {
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) {
        throw IoError("not a PQT1 tensor file (bad magic)");
    }
    Shape4 shape;
    shape.n = get_u32_le(is);
    shape.c = get_u32_le(is);
    shape.h = get_u32_le(is);
    shape.w = get_u32_le(is);
    if (!is) {
        throw IoError("truncated PQT1 header");
    }
    if (shape.n < 1 || shape.c < 1 || shape.h < 1 || shape.w < 1) {
        throw IoError("PQT1 header has a zero dimension");
    }
    std::vector<char> payload(shape.volume() * 4);
    is.read(payload.data(), std::streamsize(payload.size()));
    if (!is) {
        throw IoError("truncated PQT1 payload");
    }
    std::vector<float> data(shape.volume());
    const unsigned char* p = reinterpret_cast<const unsigned char*>(payload.data());
    for (float& v : data) {
        const std::uint32_t bits = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                                   std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
        v = std::bit_cast<float>(bits);
        p += 4;
    }
    return ActivationTensor(shape, std::move(data));
}

ActivationTensor read_pqt(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_pqt(f);
}

} // namespace aq
