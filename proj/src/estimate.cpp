#include "ordpat/estimate.hpp"

#include <cmath>

#include "ordpat/error.hpp"
#include "ordpat/numerics.hpp"

namespace ordpat {

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "confidence must lie in (0, 1)");
  }
  return normal_quantile(0.5 + 0.5 * confidence);
}

void attach_normal_ci(DependenceEstimate& est, double variance, double confidence) {
  const double z = normal_critical_value(confidence);
  if (variance < 0.0) {
    variance = 0.0;
    est.variance_clamped = true;
  }
  const double half = z * std::sqrt(variance);
  est.variance = variance;
  est.ci_low = est.value - half;
  est.ci_high = est.value + half;
}

}  // namespace ordpat
