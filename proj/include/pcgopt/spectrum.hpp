#ifndef PCGOPT_SPECTRUM_HPP
#define PCGOPT_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "pcgopt/error.hpp"
#include "pcgopt/rng.hpp"
#include "pcgopt/vector_ops.hpp"

namespace pcgopt {

enum class SpectrumMethod { lanczos, dense };

/// Extreme eigenvalues of an SPD operator and their ratio.
struct SpectrumSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  SpectrumMethod method = SpectrumMethod::dense;

  static SpectrumSummary from_extremes(double lo, double hi, SpectrumMethod method) {
    if (!(lo > 0.0) || !(hi >= lo)) {
      throw NumericalError("spectrum: extreme eigenvalues (" + std::to_string(lo) + ", " +
                           std::to_string(hi) + ") are not those of an SPD operator");
    }
    return {lo, hi, std::max(1.0, hi / lo), method};
  }
};

/// Spectral radius estimate ||G^{k+1} v|| / ||G^k v|| after `iters` normalized
/// power steps from a seeded random start. A start that the operator maps to
/// zero is replaced by a fresh one; three such restarts raise NumericalError.
template <typename Apply>
double power_spectral_radius(Apply&& apply, std::size_t dim, std::size_t iters,
                             std::uint64_t seed) {
  if (iters < 1) throw ParameterError("power_spectral_radius: iters must be >= 1");
  constexpr int kMaxRestarts = 3;
  for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
    NormalStream rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    Vector v = rng.vector(dim);
    scale(1.0 / norm2(v), v);
    double ratio = 0.0;
    bool collapsed = false;
    for (std::size_t k = 0; k < iters; ++k) {
      Vector w = apply(v);
      require_same_size(w.size(), dim, "power_spectral_radius");
      ratio = norm2(w);
      if (ratio == 0.0 || !std::isfinite(ratio)) {
        collapsed = true;
        break;
      }
      scale(1.0 / ratio, w);
      v = std::move(w);
    }
    if (!collapsed) return ratio;
  }
  throw NumericalError("power_spectral_radius: operator maps every start vector to zero");
}

}  // namespace pcgopt

#endif  // PCGOPT_SPECTRUM_HPP
