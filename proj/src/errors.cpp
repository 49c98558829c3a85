#include "hvl/errors.hpp"

namespace hvl {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Range: return "range";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::Supercritical: return "supercritical";
    case ErrorKind::NoEigenvalue: return "no_eigenvalue";
    case ErrorKind::NodeCount: return "node_count";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Refusal: return "refusal";
    case ErrorKind::DegenerateDenominator: return "degenerate_denominator";
    case ErrorKind::StepTooLarge: return "step_too_large";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace hvl
