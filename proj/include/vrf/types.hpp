#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace vrf {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid model definition (bad energies, displacements, manifolds, ...).
struct ModelError : Error {
    using Error::Error;
};

/// Inconsistent or malformed pathway (side sequences, level indices, DSL).
struct PathwayError : Error {
    using Error::Error;
};

/// Config-file syntax or schema violation; message carries file:line.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical preconditions violated (truncation inadequacy, divergent integrand).
struct NumericsError : Error {
    using Error::Error;
};

} // namespace vrf
