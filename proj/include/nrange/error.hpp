#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nrange {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NonFinite,
    RankDeficient,
    NotHermitian,
    NoConvergence,
    NotUnit,
    NotNormal,
    ValidationFailed,
    EmptySet,
    NotARefinement,
    Malformed,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this exception; kind() lets
// callers (tests, the CLI exit-code mapping) branch without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nrange
