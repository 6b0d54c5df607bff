#pragma once

#include <stdexcept>
#include <string>

namespace parlp {

// Error taxonomy. Each type names the contract it reports a violation of;
// messages carry the measured quantity where one exists.

struct AdmissibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveScale : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SideMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CoverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BaseTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PsiFloorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateOrbit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProvenanceMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyRadii : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonAdmissibleExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateBall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroQuasinorm : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace parlp
