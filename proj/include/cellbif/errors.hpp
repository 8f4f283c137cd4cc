#ifndef CELLBIF_ERRORS_HPP
#define CELLBIF_ERRORS_HPP

/**
 * @file errors.hpp
 * @brief Error taxonomy for the bifurcation pipeline.
 *
 * Every failure mode of the library is reported through a subclass of
 * cellbif::error carrying a stable machine-readable kind string.  The CLI
 * prints the kind name and maps computation errors to exit code 1.
 */

#include <stdexcept>
#include <string>

namespace cellbif {

// ============================================================================
// Base error
// ============================================================================

/// Base class of all library errors.  kind() is a stable identifier.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    /// Stable machine-readable name of the error class.
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// ============================================================================
// Numerics kernel errors
// ============================================================================

/// Argument outside the mathematical domain of a special function.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error("domain_error", msg) {}
};

/// Root bracket does not contain a sign change.
class bracket_error : public error {
public:
    explicit bracket_error(const std::string& msg) : error("bracket_error", msg) {}
};

/// A user-supplied function returned a non-finite value.
class evaluation_error : public error {
public:
    explicit evaluation_error(const std::string& msg) : error("evaluation_error", msg) {}
};

/// Discrete boundary-value system is singular or nearly so; message reports
/// the estimated smallest singular value.
class near_singularity_error : public error {
public:
    explicit near_singularity_error(const std::string& msg)
        : error("near_singularity_error", msg) {}
};

// ============================================================================
// Model and pipeline errors
// ============================================================================

/// No positive steady-state radius exists for the given parameters.
class no_steady_state_error : public error {
public:
    explicit no_steady_state_error(const std::string& msg)
        : error("no_steady_state_error", msg) {}
};

/// Diffusion evaluated at or beyond its saturation pole.
class pole_error : public error {
public:
    explicit pole_error(const std::string& msg) : error("pole_error", msg) {}
};

/// Diffusion coefficient non-positive at the steady state.
class invalid_diffusion_error : public error {
public:
    explicit invalid_diffusion_error(const std::string& msg)
        : error("invalid_diffusion_error", msg) {}
};

/// K below the critical threshold that makes alpha real.
class subcritical_k_error : public error {
public:
    explicit subcritical_k_error(const std::string& msg)
        : error("subcritical_k_error", msg) {}
};

/// No root of the bifurcation condition in the scanned K-range.
class no_bifurcation_error : public error {
public:
    explicit no_bifurcation_error(const std::string& msg)
        : error("no_bifurcation_error", msg) {}
};

/// A structurally required denominator vanished (J1'(alpha), shape coupling,
/// or the K2 denominator A0).
class degenerate_denominator_error : public error {
public:
    explicit degenerate_denominator_error(const std::string& msg)
        : error("degenerate_denominator_error", msg) {}
};

/// J1(alpha) = 0: the Bessel test function cannot be normalized.
class degenerate_test_function_error : public error {
public:
    explicit degenerate_test_function_error(const std::string& msg)
        : error("degenerate_test_function_error", msg) {}
};

/// Transversality functional vanishes (or the augmented oracle system is
/// singular, which is the same condition seen by the discrete solver).
class transversality_error : public error {
public:
    explicit transversality_error(const std::string& msg)
        : error("transversality_error", msg) {}
};

/// K2 does not change sign over the scanned bracket.
class no_transition_error : public error {
public:
    explicit no_transition_error(const std::string& msg)
        : error("no_transition_error", msg) {}
};

// ============================================================================
// Sweep / IO / config errors
// ============================================================================

/// Every point of a sweep failed.
class empty_sweep_error : public error {
public:
    explicit empty_sweep_error(const std::string& msg)
        : error("empty_sweep_error", msg) {}
};

/// Output path not writable or malformed input file.
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error("io_error", msg) {}
};

/// Invalid CLI flag combination or config-file value (exit code 2).
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error("config_error", msg) {}
};

} // namespace cellbif

#endif // CELLBIF_ERRORS_HPP
