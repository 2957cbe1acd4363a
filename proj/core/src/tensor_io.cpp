#include "afa/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace afa {

namespace {

constexpr unsigned char kMagic[4] = {0x41, 0x46, 0x41, 0x54};  // "AFAT"
constexpr unsigned char kVersion = 1;
constexpr unsigned char kDtypeF32 = 1;

void put_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u32_le(std::istream& in, std::uint32_t& v) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

static_assert(std::endian::native == std::endian::little,
              "f32 payload fast path assumes a little-endian host");

}  // namespace

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
    if (t.dims().empty() || t.dims().size() > 4) {
        raise(Errc::InvalidDims, "AFAT rank must be 1..4");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(Errc::IoError, "cannot open for writing: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(kMagic), 4);
    out.put(static_cast<char>(kVersion));
    out.put(static_cast<char>(kDtypeF32));
    out.put(static_cast<char>(t.dims().size()));
    for (std::uint32_t d : t.dims()) put_u32_le(out, d);
    out.write(reinterpret_cast<const char*>(t.values().data()),
              static_cast<std::streamsize>(t.values().size() * sizeof(float)));
    if (!out) {
        raise(Errc::IoError, "short write: " + path.string());
    }
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open for reading: " + path.string());
    }
    unsigned char magic[4];
    if (!in.read(reinterpret_cast<char*>(magic), 4) || std::memcmp(magic, kMagic, 4) != 0) {
        raise(Errc::NotTensorFile, "bad magic: " + path.string());
    }
    const int version = in.get();
    const int dtype = in.get();
    const int rank = in.get();
    if (version != kVersion || dtype != kDtypeF32) {
        raise(Errc::NotTensorFile, "unsupported version or dtype: " + path.string());
    }
    if (rank < 1 || rank > 4) {
        raise(Errc::CorruptFile, "rank out of range: " + path.string());
    }
    std::vector<std::uint32_t> dims(static_cast<std::size_t>(rank));
    std::size_t count = 1;
    for (auto& d : dims) {
        if (!get_u32_le(in, d)) {
            raise(Errc::CorruptFile, "truncated header: " + path.string());
        }
        if (d == 0) {
            raise(Errc::CorruptFile, "zero extent: " + path.string());
        }
        count *= d;
    }
    std::vector<float> values(count);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(count * sizeof(float)))) {
        raise(Errc::CorruptFile, "truncated payload: " + path.string());
    }
    if (!all_finite(values)) {
        raise(Errc::CorruptFile, "non-finite payload: " + path.string());
    }
    return Tensor(std::move(dims), std::move(values));
}

}  // namespace afa
