#include "relaynet/interference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace relaynet {

namespace {

constexpr double kPi = std::numbers::pi;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

struct EvalBudget {
  std::size_t used = 0;
  std::size_t cap = 0;
};

// Segment-seeded adaptive Gauss-Kronrod: every feature radius becomes a
// segment boundary so narrow bumps cannot slip between sample points.
template <class F>
double integrate_segments(F&& f, const std::vector<double>& breaks, double rel_tol) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] <= breaks[i]) continue;
    double err = 0.0;
    total += GK::integrate(f, breaks[i], breaks[i + 1], 12, rel_tol, &err);
  }
  return total;
}

std::vector<double> clip_breaks(std::vector<double> candidates, double lo, double hi) {
  std::vector<double> out;
  out.push_back(lo);
  std::sort(candidates.begin(), candidates.end());
  for (double c : candidates) {
    if (c > lo * (1.0 + 1e-12) + 1e-300 && c < hi * (1.0 - 1e-12)) {
      if (out.empty() || c > out.back() * (1.0 + 1e-12)) out.push_back(c);
    }
  }
  out.push_back(hi);
  return out;
}

// Integrates g(x, y) in polar coordinates over radii [r_lo, r_hi] and angles
// [ang_lo, ang_hi]. Radial and angular feature breakpoints seed the adaptive
// subdivision.
template <class G>
double integrate_polar(G&& g, double r_lo, double r_hi,
                       const std::vector<double>& radial_candidates,
                       const std::vector<double>& angular_breaks, double rel_tol,
                       EvalBudget& budget) {
  const std::vector<double> radial = clip_breaks(radial_candidates, r_lo, r_hi);
  const double inner_tol = rel_tol / 10.0;
  auto slice = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    auto along_ray = [&](double t) {
      ++budget.used;
      return t * g(t * c, t * s);
    };
    return integrate_segments(along_ray, radial, inner_tol);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < angular_breaks.size(); ++i) {
    if (angular_breaks[i + 1] <= angular_breaks[i]) continue;
    double err = 0.0;
    total += GK::integrate(slice, angular_breaks[i], angular_breaks[i + 1], 10,
                           rel_tol, &err);
  }
  return total;
}

double angular_half_width(double bump_radius, double pole_distance) {
  if (pole_distance <= 0.0) return kPi / 2;
  return std::min(kPi / 2, 4.0 * std::atan2(bump_radius, pole_distance));
}

}  // namespace

double constant_c(double alpha) {
  if (!(alpha > 2.0)) {
    throw std::domain_error(
        "constant_c: diverges for alpha <= 2 (Gamma pole at alpha = 2)");
  }
  const double two_over_alpha = 2.0 / alpha;
  return 2.0 * kPi * std::tgamma(two_over_alpha) * std::tgamma(1.0 - two_over_alpha) /
         alpha;
}

double laplace_marginal(double omega, const NetworkModel& net) {
  if (!(omega >= 0.0)) {
    throw std::domain_error("laplace_marginal: omega must be >= 0");
  }
  if (omega == 0.0 || net.lambda == 0.0) return 1.0;
  return std::exp(-net.lambda * constant_c(net.alpha) *
                  std::pow(omega, 2.0 / net.alpha));
}

std::optional<double> TransformCache::lookup(const Key& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void TransformCache::store(const Key& key, double value) {
  std::lock_guard<std::mutex> lock(mutex_);
  values_.emplace(key, value);
}

std::size_t TransformCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return values_.size();
}

std::size_t TransformCache::KeyHash::operator()(const Key& k) const {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (double v : {k.omega1, k.omega2, k.separation, k.alpha}) {
    h = mix(h ^ std::bit_cast<std::uint64_t>(v));
  }
  return static_cast<std::size_t>(h);
}

double coupling_integral_f(double omega1, double omega2, double separation,
                           double alpha, const QuadratureSpec& spec,
                           TransformCache* cache) {
  if (!(omega1 >= 0.0 && omega2 >= 0.0)) {
    throw std::domain_error("coupling_integral_f: omega arguments must be >= 0");
  }
  if (!(separation >= 0.0)) {
    throw std::domain_error("coupling_integral_f: separation must be >= 0");
  }
  if (omega1 == 0.0 || omega2 == 0.0) return 0.0;

  const TransformCache::Key key{omega1, omega2, separation, alpha};
  if (cache) {
    if (auto hit = cache->lookup(key)) return *hit;
  }

  // Midpoint frame: destination pole at (-L/2, 0), relay pole at (+L/2, 0).
  const double half_sep = separation / 2.0;
  const double half_alpha = alpha / 2.0;
  const double bump_d = std::pow(omega1, 1.0 / alpha);
  const double bump_r = std::pow(omega2, 1.0 / alpha);
  auto g = [&](double x, double y) {
    const double dd = (x + half_sep) * (x + half_sep) + y * y;
    const double dr = (x - half_sep) * (x - half_sep) + y * y;
    const double pd = std::pow(dd, half_alpha);
    const double pr = std::pow(dr, half_alpha);
    return (omega1 / (omega1 + pd)) * (omega2 / (omega2 + pr));
  };

  const double feature = std::max({separation, bump_d, bump_r});
  std::vector<double> radial{bump_d,
                             bump_r,
                             std::min(bump_d, bump_r) / 8.0,
                             half_sep,
                             half_sep > 0 ? half_sep - std::max(bump_d, bump_r) : 0.0,
                             half_sep + std::max(bump_d, bump_r)};
  // Integrand is symmetric about the pole axis: integrate [0, pi] and double.
  std::vector<double> angular =
      clip_breaks({angular_half_width(bump_r, half_sep), kPi / 2,
                   kPi - angular_half_width(bump_d, half_sep)},
                  0.0, kPi);

  EvalBudget budget{0, spec.max_evaluations};
  auto tail_bound = [&](double R) {
    return 2.0 * kPi * omega1 * omega2 * std::pow(R, 2.0 - 2.0 * alpha) /
           (2.0 * alpha - 2.0);
  };

  double radius = spec.radius_safety * feature;
  double acc = 2.0 * integrate_polar(g, 0.0, radius, radial, angular, spec.rel_tol,
                                     budget);
  for (int i = 0; i < 60; ++i) {
    const double tail = tail_bound(radius);
    if (tail <= spec.rel_tol * std::max(std::abs(acc + tail), 1e-300)) break;
    if (budget.used > budget.cap) {
      throw QuadratureAccuracyError(
          "coupling_integral_f: evaluation budget exhausted", acc + tail, tail);
    }
    acc += 2.0 * integrate_polar(g, radius, 2.0 * radius, {radius, 2.0 * radius},
                                 angular, spec.rel_tol, budget);
    radius *= 2.0;
  }
  const double result = acc + tail_bound(radius);

  if (cache) cache->store(key, result);
  return result;
}

double coupling_integral_f(const JointTransformArgs& args, const QuadratureSpec& spec,
                           TransformCache* cache) {
  if (args.geometry.alpha != args.network.alpha) {
    throw std::invalid_argument(
        "coupling_integral_f: geometry and network disagree on alpha");
  }
  return coupling_integral_f(args.omega1, args.omega2,
                             args.geometry.relay_dest_separation(),
                             args.network.alpha, spec, cache);
}

double laplace_joint(const JointTransformArgs& args, const QuadratureSpec& spec,
                     TransformCache* cache) {
  if (!(args.omega1 >= 0.0 && args.omega2 >= 0.0)) {
    throw std::domain_error("laplace_joint: omega arguments must be >= 0");
  }
  if (args.omega1 == 0.0) return laplace_marginal(args.omega2, args.network);
  if (args.omega2 == 0.0) return laplace_marginal(args.omega1, args.network);
  if (args.network.lambda == 0.0) return 1.0;

  const double alpha = args.network.alpha;
  const double c = constant_c(alpha);
  const double coupling = coupling_integral_f(args, spec, cache);
  const double exponent = c * (std::pow(args.omega1, 2.0 / alpha) +
                               std::pow(args.omega2, 2.0 / alpha)) -
                          coupling;
  return std::exp(-args.network.lambda * exponent);
}

double pgfl_joint_oracle(double omega1, double omega2, Vec2 dest, Vec2 relay,
                         const NetworkModel& net, const QuadratureSpec& spec) {
  if (!(omega1 >= 0.0 && omega2 >= 0.0)) {
    throw std::domain_error("pgfl_joint_oracle: omega arguments must be >= 0");
  }
  if (omega1 == 0.0 && omega2 == 0.0) return 1.0;
  if (net.lambda == 0.0) return 1.0;

  const double alpha = net.alpha;
  const double half_alpha = alpha / 2.0;
  const Vec2 center = midpoint(dest, relay);
  const Vec2 pd = dest - center;
  const Vec2 pr = relay - center;
  const double pole_dist = norm(pd);  // == norm(pr)

  // 1 - 1/((1 + w1 l_d)(1 + w2 l_r)) written as a + b - a*b with
  // a = w1/(w1 + |x-d|^alpha): bounded by 1, no far-field cancellation.
  auto q = [&](double x, double y) {
    const double dd = (x - pd.x) * (x - pd.x) + (y - pd.y) * (y - pd.y);
    const double dr = (x - pr.x) * (x - pr.x) + (y - pr.y) * (y - pr.y);
    const double a = omega1 > 0 ? omega1 / (omega1 + std::pow(dd, half_alpha)) : 0.0;
    const double b = omega2 > 0 ? omega2 / (omega2 + std::pow(dr, half_alpha)) : 0.0;
    return a + b - a * b;
  };

  const double bump_d = omega1 > 0 ? std::pow(omega1, 1.0 / alpha) : 0.0;
  const double bump_r = omega2 > 0 ? std::pow(omega2, 1.0 / alpha) : 0.0;
  std::vector<double> radial{bump_d,
                             bump_r,
                             pole_dist,
                             pole_dist - std::max(bump_d, bump_r),
                             pole_dist + std::max(bump_d, bump_r),
                             std::min(std::max(bump_d, bump_r), pole_dist) / 8.0};

  std::vector<double> angular_candidates;
  auto add_pole_breaks = [&](Vec2 p, double bump) {
    if (bump <= 0.0) return;
    const double dir = std::atan2(p.y, p.x);
    const double w = angular_half_width(bump, norm(p));
    for (double a : {dir - w, dir, dir + w}) {
      double wrapped = std::fmod(a, 2.0 * kPi);
      if (wrapped < 0) wrapped += 2.0 * kPi;
      angular_candidates.push_back(wrapped);
    }
  };
  add_pole_breaks(pd, bump_d);
  add_pole_breaks(pr, bump_r);
  const std::vector<double> angular =
      clip_breaks(angular_candidates, 0.0, 2.0 * kPi);

  EvalBudget budget{0, spec.max_evaluations};
  auto tail_bound = [&](double R) {
    return 2.0 * kPi * (omega1 + omega2) * std::pow(R, 2.0 - alpha) / (alpha - 2.0);
  };

  const double feature = std::max({2.0 * pole_dist, bump_d, bump_r, 1e-30});
  double radius = spec.radius_safety * feature;
  double acc =
      integrate_polar(q, 0.0, radius, radial, angular, spec.rel_tol, budget);
  for (int i = 0; i < 80; ++i) {
    const double tail = tail_bound(radius);
    if (tail <= spec.rel_tol * std::max(std::abs(acc + tail), 1e-300)) break;
    if (budget.used > budget.cap) {
      throw QuadratureAccuracyError("pgfl_joint_oracle: evaluation budget exhausted",
                                    std::exp(-net.lambda * (acc + tail)),
                                    net.lambda * tail);
    }
    acc += integrate_polar(q, radius, 2.0 * radius, {radius, 2.0 * radius}, angular,
                           spec.rel_tol, budget);
    radius *= 2.0;
  }
  return std::exp(-net.lambda * (acc + tail_bound(radius)));
}

double pgfl_joint_oracle(const JointTransformArgs& args, const QuadratureSpec& spec) {
  if (args.geometry.alpha != args.network.alpha) {
    throw std::invalid_argument(
        "pgfl_joint_oracle: geometry and network disagree on alpha");
  }
  return pgfl_joint_oracle(args.omega1, args.omega2, args.geometry.dest,
                           args.geometry.relay, args.network, spec);
}

double fading_mixed_laplace(double kappa, const NetworkModel& net,
                            const QuadratureSpec& spec) {
  if (!(kappa >= 0.0)) {
    throw std::domain_error("fading_mixed_laplace: kappa must be >= 0");
  }
  if (kappa == 0.0 || net.lambda == 0.0) return 1.0;
  const double p = 2.0 / net.alpha;
  const double s = net.lambda * constant_c(net.alpha) * std::pow(kappa, p);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [&](double h) { return std::exp(-h - s * std::pow(h, p)); };
  double err = 0.0;
  const double value = integrator.integrate(integrand, std::min(spec.rel_tol, 1e-10),
                                            &err);
  return std::min(value, 1.0);
}

}  // namespace relaynet
