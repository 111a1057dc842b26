#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirdro {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error type for precondition and numerical failures raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SIRDRO_REQUIRE(cond, msg)                                            \
    do {                                                                     \
        if (!(cond)) throw ::sirdro::Error(msg);                             \
    } while (0)

// Rounding toward the shifted lattice a + Z.
// ceil_to(t, a)  = smallest point of a + Z that is >= t
// floor_to(t, a) = largest point of a + Z that is <= t
inline double ceil_to(double t, double a) { return std::ceil(t - a) + a; }
inline double floor_to(double t, double a) { return std::floor(t - a) + a; }

// (s)^+ and the paper's one-sided rounding operators.
inline double pos(double s) { return s > 0.0 ? s : 0.0; }
inline double neg(double s) { return s < 0.0 ? -s : 0.0; }

// ceil(s)^+ = max{ceil(s), 0},  floor(s)^- = max{-floor(s), 0}
inline double ceil_pos(double s) { return pos(std::ceil(s)); }
inline double floor_neg(double s) { return pos(-std::floor(s)); }

// Nearest integer distance helpers with a tolerance for lattice membership.
inline bool is_integer(double s, double tol = 1e-9) {
    return std::abs(s - std::round(s)) <= tol;
}

inline double sqr(double s) { return s * s; }

}  // namespace sirdro
