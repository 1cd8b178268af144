#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fouriscale {

/// Base of every error the library throws. Callers that only care about
/// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Extents, ranks or strides that do not fit the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A scalar argument outside its documented domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A configuration document or ScaleConfig that violates its schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Spectrum in the wrong layout for the requested operation.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// Inverse transform produced an imaginary residue above tolerance.
class NonRealError : public Error {
public:
    explicit NonRealError(double residue)
        : Error("inverse DFT is not real: imaginary residue "
                + std::to_string(residue) + " exceeds 1e-6"),
          residue_(residue) {}

    double residue() const noexcept { return residue_; }

private:
    double residue_;
};

/// Malformed serialized data (bad magic, unreadable raster, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedDtypeError : public FormatError {
public:
    explicit UnsupportedDtypeError(unsigned code)
        : FormatError("unsupported tensor dtype code " + std::to_string(code)
                      + " (expected 1 = f32 or 2 = f64)") {}
};

/// Payload shorter (or longer) than the header promises.
class LengthError : public FormatError {
public:
    LengthError(std::uint64_t expected, std::uint64_t actual)
        : FormatError("tensor payload length mismatch: expected "
                      + std::to_string(expected) + " bytes, got "
                      + std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    std::uint64_t expected() const noexcept { return expected_; }
    std::uint64_t actual() const noexcept { return actual_; }

private:
    std::uint64_t expected_;
    std::uint64_t actual_;
};

/// Filesystem or stream failure.
class IoError : public Error {
public:
    using Error::Error;

    IoError(const std::string& what, std::uint64_t offset)
        : Error(what + " at byte offset " + std::to_string(offset)) {}
};

}  // namespace fouriscale
