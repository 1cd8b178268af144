#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "fouriscale/fouriscale.hpp"

namespace support {

namespace fs = std::filesystem;
using namespace fouriscale;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("fouriscale_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    fs::path operator/(const std::string& name) const { return path_ / name; }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    os << text;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

inline std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'')
            q += "'\\''";
        else
            q += c;
    }
    return q + "'";
}

/// Runs the CLI with the given arguments, capturing stdout and stderr.
inline RunResult run_cli(const std::vector<std::string>& args, const TempDir& scratch) {
    static int n = 0;
    const auto out = scratch / ("stdout_" + std::to_string(n));
    const auto err = scratch / ("stderr_" + std::to_string(n));
    ++n;
    std::string cmd = quote(FOURISCALE_CLI_PATH);
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " > " + quote(out.string()) + " 2> " + quote(err.string());
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
}

inline std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

/// Distance between the log-amplitude profile of a natively low-resolution
/// signal and that of a stride-s decimated high-resolution one, with and
/// without the ideal low-pass filter applied before decimation.
///
/// The native low-resolution spectrum is the band-limited part of the
/// high-resolution spectrum: centralized frequencies -n/2 .. n/2-1 per axis
/// with n = H/s, which is what a sensor at the lower rate would record.
struct ProfileGap {
    double unfiltered = 0.0;
    double filtered = 0.0;
};

inline Spectrum band_limited_spectrum(const Spectrum& high, std::size_t stride) {
    const std::size_t H = high.rows(), W = high.cols();
    const Extent2 low{H / stride, W / stride};
    auto out = Spectrum::zeros(low);
    for (std::size_t u = 0; u < low.rows; ++u) {
        const std::size_t src_u = u < low.rows / 2 ? u : H - (low.rows - u);
        for (std::size_t v = 0; v < low.cols; ++v) {
            const std::size_t src_v = v < low.cols / 2 ? v : W - (low.cols - v);
            out(u, v) = high(src_u, src_v);
        }
    }
    return out;
}

inline ProfileGap profile_gap(const Tensor& high, std::size_t stride) {
    const auto native = log_amplitude_profile(centralize(band_limited_spectrum(dft2(high), stride)));
    const auto plain = log_amplitude_profile(centralize(dft2(downsample(high, stride))));
    const auto filtered = log_amplitude_profile(
        centralize(dft2(downsample(low_pass(high, FilterSpec::ideal(static_cast<double>(stride))), stride))));
    return {l2(native, plain), l2(native, filtered)};
}

}  // namespace support
