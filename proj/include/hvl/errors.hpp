#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvl {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Domain,
    Range,
    Classification,
    Supercritical,
    NoEigenvalue,
    NodeCount,
    Divergence,
    Precondition,
    Refusal,
    DegenerateDenominator,
    StepTooLarge,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hvl
