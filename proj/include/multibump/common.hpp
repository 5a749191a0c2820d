#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace multibump {

inline constexpr double kPi = 3.14159265358979323846;

/// Exponential decay rate of the cross-section ground mode: sqrt(lambda + pi^2/4).
/// Defined whenever lambda exceeds the negated first cross-section eigenvalue.
inline double decay_mu(double lambda) {
    return std::sqrt(lambda + kPi * kPi / 4.0);
}

inline double sqr(double x) { return x * x; }

// ---------------------------------------------------------------------------
// Error taxonomy. Configuration problems exit with code 2, numerical failures
// with 3, verification failures with 4 (see tools/).
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct VerificationFailure : Error { using Error::Error; };

struct RangeViolation : ConfigError { using ConfigError::ConfigError; };
struct OrderViolation : ConfigError { using ConfigError::ConfigError; };
struct ResolutionError : ConfigError { using ConfigError::ConfigError; };
struct SelfIntersection : ConfigError { using ConfigError::ConfigError; };
struct DegenerateTangent : ConfigError { using ConfigError::ConfigError; };
struct ClosureMismatch : ConfigError { using ConfigError::ConfigError; };
struct CurvatureTooLarge : ConfigError { using ConfigError::ConfigError; };
struct UnsupportedNonlinearity : ConfigError { using ConfigError::ConfigError; };

struct IndefiniteOperator : NumericalError { using NumericalError::NumericalError; };
struct ConvergenceFailure : NumericalError { using NumericalError::NumericalError; };
struct NewtonDivergence : NumericalError { using NumericalError::NumericalError; };
struct CollapseToZero : NumericalError { using NumericalError::NumericalError; };
struct DegeneracySuspected : NumericalError { using NumericalError::NumericalError; };
struct WindowOverflow : NumericalError { using NumericalError::NumericalError; };
struct SignViolation : NumericalError { using NumericalError::NumericalError; };
struct ContractionFailure : NumericalError { using NumericalError::NumericalError; };
struct LeftTrustRegion : NumericalError { using NumericalError::NumericalError; };
struct IoError : NumericalError { using NumericalError::NumericalError; };

// A run that finished but produced output violating a property it was asked
// to guarantee: these are surfaced separately from numerical breakdowns.
struct StuckOnBoundary : VerificationFailure { using VerificationFailure::VerificationFailure; };
struct SignPatternBroken : VerificationFailure { using VerificationFailure::VerificationFailure; };

// ---------------------------------------------------------------------------
// Deterministic RNG. std::uniform_real_distribution is implementation-defined,
// so draws are derived from the raw 64-bit stream directly; identical seeds
// give identical streams on every platform.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift* variant; adequate for Monte Carlo sampling and test data.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no cached spare, keeps the stream simple).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Least-squares line fit, used for decay-rate and convergence-slope estimates.
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw RangeViolation("linear_fit: need at least two samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) throw RangeViolation("linear_fit: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    return f;
}

}  // namespace multibump
