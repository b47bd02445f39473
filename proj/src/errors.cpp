#include "qdburst/errors.hpp"

namespace qdburst {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::InvalidArg: return "InvalidArg";
        case ErrorKind::EmptyIndexSet: return "EmptyIndexSet";
        case ErrorKind::QuantumMismatch: return "QuantumMismatch";
        case ErrorKind::HyperperiodOverflow: return "HyperperiodOverflow";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace qdburst
