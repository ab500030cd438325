#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qbath {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Invalid physical parameters or malformed input.  CLI exit code 1.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured limit (memory, basis dimension) would be exceeded.  CLI exit code 2.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical diagnostic tripped (norm/trace drift, non-convergence, lost positivity).
struct numerics_error : std::runtime_error {
    explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbath
