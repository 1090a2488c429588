#include "hsic/errors.hpp"

namespace hsic {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parameter: return "parameter error";
        case ErrorKind::Shape: return "shape error";
        case ErrorKind::SampleSize: return "sample-size error";
        case ErrorKind::Convention: return "convention error";
        case ErrorKind::DegenerateLabels: return "degenerate-label error";
        case ErrorKind::Index: return "index error";
        case ErrorKind::Unavailable: return "unavailable";
        case ErrorKind::Input: return "input error";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace hsic
