// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace tqme {

// A propagated state violated positivity (min eigenvalue below the monitor
// floor). Usually means the step size is too large for the chosen dynamics.
struct NonPhysicalState : std::runtime_error {
    explicit NonPhysicalState(const std::string& what) : std::runtime_error(what) {}
};

// Two eigenvalues of the density matrix came closer than the configured gap
// floor; the eigensystem propagator cannot divide by their difference.
struct DegenerateSpectrum : std::runtime_error {
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// The closed-form second-moment solution only covers the underdamped branch.
struct OverdampedUnsupported : std::domain_error {
    explicit OverdampedUnsupported(const std::string& what) : std::domain_error(what) {}
};

// Invalid run configuration (bad key, bad value, invalid combination).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tqme
