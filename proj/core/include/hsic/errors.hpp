#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsic {

enum class ErrorKind {
    Parameter,         // invalid argument value (sigma <= 0, bad fraction, ...)
    Shape,             // mismatched matrix/vector dimensions
    SampleSize,        // too few samples for the requested estimator
    Convention,        // kernel matrix carries the wrong diagonal convention
    DegenerateLabels,  // label vector cannot support the requested label kernel
    Index,             // feature index out of range or inactive
    Unavailable,       // quantity cannot be produced (e.g. zero variance, size guard)
    Input,             // malformed external input (CSV, flags)
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hsic
