#pragma once

// Portable tensor file format ("FSTN"):
//
//   offset  size      field
//   0       4         magic "FSTN"
//   4       1         version (1)
//   5       1         dtype code (1 = f32, 2 = f64)
//   6       1         rank
//   7       4*rank    extents, u32 little-endian
//   ...     n*width   payload, little-endian, row-major
//
// No alignment padding. The header is exactly 7 + 4*rank bytes.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

enum class Dtype : std::uint8_t { F32 = 1, F64 = 2 };

inline constexpr std::array<char, 4> kTensorMagic{'F', 'S', 'T', 'N'};
inline constexpr std::uint8_t kTensorVersion = 1;

inline std::size_t dtype_width(Dtype d) { return d == Dtype::F32 ? 4 : 8; }

inline std::size_t tensor_header_size(std::size_t rank) { return 7 + 4 * rank; }

namespace detail {

template <typename U>
void store_le(std::vector<char>& out, U value) {
    for (std::size_t b = 0; b < sizeof(U); ++b)
        out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

template <typename U>
U load_le(const unsigned char* p) {
    U v = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(p[b]) << (8 * b);
    return v;
}

inline void put(std::ostream& os, const std::vector<char>& bytes, std::uint64_t& offset) {
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("tensor write failed", offset);
    offset += bytes.size();
}

}  // namespace detail

/// Serializes `t`; returns the total number of bytes written.
inline std::uint64_t write_tensor(const Tensor& t, std::ostream& os, Dtype dtype = Dtype::F64) {
    std::vector<char> header(kTensorMagic.begin(), kTensorMagic.end());
    header.push_back(static_cast<char>(kTensorVersion));
    header.push_back(static_cast<char>(dtype));
    header.push_back(static_cast<char>(t.rank()));
    for (auto d : t.dims()) {
        if (d > std::numeric_limits<std::uint32_t>::max())
            throw ShapeError("extent exceeds u32 range");
        detail::store_le(header, static_cast<std::uint32_t>(d));
    }

    std::vector<char> payload;
    payload.reserve(t.size() * dtype_width(dtype));
    for (double v : t.values()) {
        if (dtype == Dtype::F64) {
            detail::store_le(payload, std::bit_cast<std::uint64_t>(v));
        } else {
            const auto f = static_cast<float>(v);
            if (!std::isfinite(f)) throw ParameterError("value overflows f32 dtype");
            detail::store_le(payload, std::bit_cast<std::uint32_t>(f));
        }
    }

    std::uint64_t offset = 0;
    detail::put(os, header, offset);
    detail::put(os, payload, offset);
    return offset;
}

/// Parses one tensor from the stream. f32 payloads are widened to f64.
inline Tensor read_tensor(std::istream& is) {
    std::array<unsigned char, 7> fixed{};
    is.read(reinterpret_cast<char*>(fixed.data()), fixed.size());
    if (is.gcount() < static_cast<std::streamsize>(fixed.size()))
        throw FormatError("truncated tensor header");
    if (std::memcmp(fixed.data(), kTensorMagic.data(), 4) != 0)
        throw FormatError("bad tensor magic (expected \"FSTN\")");
    if (fixed[4] != kTensorVersion)
        throw FormatError("unsupported tensor format version " + std::to_string(fixed[4]));
    const unsigned code = fixed[5];
    if (code != 1 && code != 2) throw UnsupportedDtypeError(code);
    const auto dtype = static_cast<Dtype>(code);
    const std::size_t rank = fixed[6];
    if (rank != 2 && rank != 3)
        throw FormatError("unsupported tensor rank " + std::to_string(rank));

    std::vector<unsigned char> dim_bytes(4 * rank);
    is.read(reinterpret_cast<char*>(dim_bytes.data()),
            static_cast<std::streamsize>(dim_bytes.size()));
    if (is.gcount() < static_cast<std::streamsize>(dim_bytes.size()))
        throw FormatError("truncated tensor header");
    std::vector<std::size_t> dims(rank);
    std::uint64_t count = 1;
    for (std::size_t r = 0; r < rank; ++r) {
        dims[r] = detail::load_le<std::uint32_t>(dim_bytes.data() + 4 * r);
        if (dims[r] == 0) throw FormatError("tensor extent of zero");
        count *= dims[r];
    }

    const std::uint64_t expected = count * dtype_width(dtype);
    std::vector<unsigned char> payload(expected);
    is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(expected));
    const auto got = static_cast<std::uint64_t>(is.gcount());
    if (got != expected) throw LengthError(expected, got);

    std::vector<double> data(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (dtype == Dtype::F64)
            data[i] = std::bit_cast<double>(detail::load_le<std::uint64_t>(&payload[8 * i]));
        else
            data[i] = std::bit_cast<float>(detail::load_le<std::uint32_t>(&payload[4 * i]));
        if (!std::isfinite(data[i])) throw FormatError("non-finite value in tensor payload");
    }
    return Tensor(std::move(dims), std::move(data));
}

inline std::uint64_t save_tensor(const Tensor& t, const std::filesystem::path& path,
                                 Dtype dtype = Dtype::F64) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    const auto n = write_tensor(t, os, dtype);
    os.close();
    if (!os) throw IoError("failed to flush " + path.string(), n);
    return n;
}

/// Loads a tensor file; trailing bytes after the payload are a length error.
inline Tensor load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    Tensor t = read_tensor(is);
    is.peek();
    if (!is.eof()) {
        std::ifstream head(path, std::ios::binary);
        head.seekg(5);
        const auto width = dtype_width(static_cast<Dtype>(head.get()));
        const std::uint64_t header = tensor_header_size(t.rank());
        throw LengthError(t.size() * width, std::filesystem::file_size(path) - header);
    }
    return t;
}

}  // namespace fouriscale
