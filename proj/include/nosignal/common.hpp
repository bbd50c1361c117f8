#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nosignal {

using cplx = std::complex<double>;

// Numerical margins that make the exact-symbolic checks decidable in
// floating point. All desk-scale spaces here have dimension <= 64, so
// double precision leaves many orders of magnitude of headroom.
inline constexpr double eps_norm = 1e-10;     // state normalization
inline constexpr double eps_rank = 1e-9;      // Schmidt coefficient cutoff
inline constexpr double eps_unitary = 1e-10;  // Gram-vs-identity deviation
inline constexpr double eps_local = 1e-8;     // locality factorization residual
inline constexpr double eps_sig = 1e-9;       // margin around |alpha| = 1/sqrt(2)

/// Malformed input. Audits never throw this for a negative verdict: a
/// contradiction or a failed isometry check is a result, not an error.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw validation_error(message);
}

}  // namespace nosignal
