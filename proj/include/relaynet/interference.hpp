#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "relaynet/model.hpp"

namespace relaynet {

/// Controls the adaptive planar quadratures behind the coupling integral and
/// the PGFL oracle. The truncation policy starts the integration disk at
/// `radius_safety` times the largest feature scale (pole separation and the
/// omega^(1/alpha) bump radii) and doubles it until the analytic tail
/// estimate drops below rel_tol times the running value; the tail estimate is
/// then added to the result.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  std::size_t max_evaluations = 50'000'000;
  double radius_safety = 8.0;
};

/// Thrown when the evaluation budget runs out before the tolerance is met.
/// Carries the best estimate and its error bound.
class QuadratureAccuracyError : public std::runtime_error {
 public:
  QuadratureAccuracyError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// C = 2*pi*Gamma(2/alpha)*Gamma(1 - 2/alpha)/alpha. Diverges as alpha -> 2.
double constant_c(double alpha);

/// exp(-lambda * C * omega^(2/alpha)): Laplace transform of the interference
/// observed at a single point. Equals 1 at omega = 0 or lambda = 0.
double laplace_marginal(double omega, const NetworkModel& net);

/// Arguments of the joint transform E[exp(-omega1*I_d - omega2*I_r)]:
/// omega1 pairs with the interference at the destination, omega2 with the
/// interference at the relay.
struct JointTransformArgs {
  double omega1 = 0.0;
  double omega2 = 0.0;
  LinkGeometry geometry;
  NetworkModel network;
};

/// Memoizes coupling integrals on (omega1, omega2, separation, alpha).
/// Safe under concurrent lookup/store.
class TransformCache {
 public:
  struct Key {
    double omega1, omega2, separation, alpha;
    bool operator==(const Key&) const = default;
  };

  std::optional<double> lookup(const Key& key) const;
  void store(const Key& key, double value);
  std::size_t size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  mutable std::mutex mutex_;
  std::unordered_map<Key, double, KeyHash> values_;
};

/// f(omega1, omega2) = integral over the plane of
///   omega1*omega2 / ((omega1 + |x-d|^alpha) * (omega2 + |x-r|^alpha)) dx.
/// Depends on the geometry only through |d - r|; symmetric under swapping
/// (omega1, d) <-> (omega2, r); bounded by min(C*omega1^(2/alpha),
/// C*omega2^(2/alpha)).
double coupling_integral_f(double omega1, double omega2, double separation,
                           double alpha, const QuadratureSpec& spec,
                           TransformCache* cache = nullptr);
double coupling_integral_f(const JointTransformArgs& args, const QuadratureSpec& spec,
                           TransformCache* cache = nullptr);

/// Joint Laplace transform of (I_d, I_r):
///   exp(-lambda * (C*omega1^(2/alpha) + C*omega2^(2/alpha) - f(omega1, omega2))).
/// Reduces to laplace_marginal when either argument is zero and satisfies
///   marginal(omega1)*marginal(omega2) <= joint <= min(marginals).
double laplace_joint(const JointTransformArgs& args, const QuadratureSpec& spec,
                     TransformCache* cache = nullptr);

/// Validation oracle: evaluates the same transform through the probability
/// generating functional of the marked process, integrating
///   1 - 1/((1 + omega1*l(x,d)) * (1 + omega2*l(x,r)))
/// directly over the plane around the actual point positions.
double pgfl_joint_oracle(double omega1, double omega2, Vec2 dest, Vec2 relay,
                         const NetworkModel& net, const QuadratureSpec& spec);
double pgfl_joint_oracle(const JointTransformArgs& args, const QuadratureSpec& spec);

/// E_h[ exp(-lambda*C*(kappa*h)^(2/alpha)) ] for h ~ Exp(1): the marginal
/// transform averaged over a fading-scaled argument. Used by the CF
/// relay-link bound.
double fading_mixed_laplace(double kappa, const NetworkModel& net,
                            const QuadratureSpec& spec);

}  // namespace relaynet
