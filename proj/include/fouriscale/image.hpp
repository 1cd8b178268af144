#pragma once

// Lossless PNG import/export. Import accepts 8- and 16-bit grayscale or RGB
// (palette and sub-byte gray are expanded to 8 bits, alpha is dropped) and
// scales to [0, 1] by the bit-depth maximum. Export always writes 8 bits.

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngInfo {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int channels = 0;
    int bit_depth = 0;
};

// Only plain data lives in the frames below, so a longjmp out of libpng
// skips no destructors.
inline bool png_read_header(png_structp png, png_infop info, std::FILE* f, PngInfo* out) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, f);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (depth == 16) png_set_swap(png);  // host little-endian u16
    png_read_update_info(png, info);
    out->width = png_get_image_width(png, info);
    out->height = png_get_image_height(png, info);
    out->channels = png_get_channels(png, info);
    out->bit_depth = png_get_bit_depth(png, info);
    return true;
}

inline bool png_read_pixels(png_structp png, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

inline bool png_write_pixels(png_structp png, png_infop info, std::FILE* f,
                             png_uint_32 width, png_uint_32 height, int color_type,
                             png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, f);
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

}  // namespace detail

/// Reads a PNG as a C x H x W tensor in [0, 1].
inline Tensor image_import(const std::filesystem::path& path) {
    detail::FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw FormatError("cannot open image " + path.string());
    unsigned char sig[8] = {};
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw FormatError(path.string() + " is not a PNG image");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw FormatError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    struct ReadGuard {
        png_structp* p;
        png_infop* i;
        ~ReadGuard() { png_destroy_read_struct(p, i, nullptr); }
    } guard{&png, &info};
    if (!info) throw FormatError("libpng initialisation failed");

    png_set_sig_bytes(png, 8);
    detail::PngInfo meta;
    if (!detail::png_read_header(png, info, f.get(), &meta))
        throw FormatError("unreadable PNG header in " + path.string());
    if (meta.channels != 1 && meta.channels != 3)
        throw FormatError("unsupported PNG channel layout in " + path.string());

    const std::size_t bytes_per_sample = meta.bit_depth == 16 ? 2 : 1;
    const std::size_t stride = meta.width * meta.channels * bytes_per_sample;
    std::vector<unsigned char> pixels(stride * meta.height);
    std::vector<png_bytep> rows(meta.height);
    for (png_uint_32 r = 0; r < meta.height; ++r) rows[r] = pixels.data() + r * stride;
    if (!detail::png_read_pixels(png, rows.data()))
        throw FormatError("corrupt PNG data in " + path.string());

    const std::size_t channels = meta.channels;
    const std::size_t h = meta.height;
    const std::size_t w = meta.width;
    const double full_scale = bytes_per_sample == 2 ? 65535.0 : 255.0;
    std::vector<double> data(channels * h * w);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            for (std::size_t c = 0; c < channels; ++c) {
                const std::size_t sample = (j * channels + c);
                double raw;
                if (bytes_per_sample == 2) {
                    std::uint16_t v;
                    std::memcpy(&v, rows[i] + 2 * sample, 2);
                    raw = v;
                } else {
                    raw = rows[i][sample];
                }
                data[(c * h + i) * w + j] = raw / full_scale;
            }
    return Tensor({channels, h, w}, std::move(data));
}

/// 8-bit quantization: clamp to [0, 1], then round(v * 255) half away from zero.
inline std::uint8_t quantize_u8(double v) {
    return static_cast<std::uint8_t>(std::round(std::clamp(v, 0.0, 1.0) * 255.0));
}

/// Writes a rank-2 tensor or a rank-3 tensor with 1 or 3 channels as an
/// 8-bit PNG.
inline void image_export(const Tensor& t, const std::filesystem::path& path) {
    const std::size_t channels = t.channels();
    if (channels != 1 && channels != 3)
        throw ShapeError("image export needs 1 or 3 channels, got " + std::to_string(channels));
    const std::size_t h = t.height();
    const std::size_t w = t.width();

    std::vector<unsigned char> pixels(h * w * channels);
    for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j)
                pixels[(i * w + j) * channels + c] =
                    quantize_u8(t.rank() == 3 ? t(c, i, j) : t(i, j));
    std::vector<png_bytep> rows(h);
    for (std::size_t r = 0; r < h; ++r) rows[r] = pixels.data() + r * w * channels;

    detail::FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    struct WriteGuard {
        png_structp* p;
        png_infop* i;
        ~WriteGuard() { png_destroy_write_struct(p, i); }
    } guard{&png, &info};
    if (!info) throw IoError("libpng initialisation failed");

    const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    if (!detail::png_write_pixels(png, info, f.get(), static_cast<png_uint_32>(w),
                                  static_cast<png_uint_32>(h), color, rows.data()))
        throw IoError("PNG encoding failed for " + path.string());
    if (std::fflush(f.get()) != 0) throw IoError("failed to flush " + path.string());
}

}  // namespace fouriscale
