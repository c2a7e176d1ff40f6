#include "nrange/error.hpp"

namespace nrange {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotUnit: return "NotUnit";
        case ErrorKind::NotNormal: return "NotNormal";
        case ErrorKind::ValidationFailed: return "ValidationFailed";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::NotARefinement: return "NotARefinement";
        case ErrorKind::Malformed: return "Malformed";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace nrange
