#ifndef POLYFLAG_CONFIG_HPP
#define POLYFLAG_CONFIG_HPP

#include <cstdint>
#include <string>

namespace polyflag {

/// Central numeric tolerances. Every fuzzy comparison in the library goes
/// through one of these knobs so experiments can tighten or relax them in
/// one place.
struct Tolerances {
  double orthogonality = 1e-12;  // basis^T basis vs identity
  double rank = 1e-10;           // rank decisions in float factorizations
  double predicate = 1e-9;       // geometric predicates (support tests, membership)
  double intersection = 1e-12;   // flat-body contact threshold
  double quantize = 1e-12;       // memo-cache key quantization
};

struct Config {
  Tolerances tol;
  // Cones of this sphere dimension or lower are integrated by closed-form
  // point/arc quadrature instead of Monte Carlo.
  int exact_quadrature_max_dim = 2;
  // Inner sample count of a nested Monte Carlo defaults to sqrt(outer).
  double nested_inner_exponent = 0.5;
  int threads = 0;  // 0 = hardware concurrency
};

Config& config();

inline const Tolerances& tols() { return config().tol; }

extern const char* const kVersionTag;

}  // namespace polyflag

#endif
