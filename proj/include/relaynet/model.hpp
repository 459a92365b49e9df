#pragma once

#include <cmath>
#include <stdexcept>

namespace relaynet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 midpoint(Vec2 a, Vec2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Power-law path gain distance^(-alpha). Requires distance > 0 and alpha > 2.
double path_loss(double distance, double alpha);

/// Interferer field parameters: homogeneous Poisson process of density
/// `lambda` with unit-mean exponential power fading on every link.
struct NetworkModel {
  double lambda = 1e-4;      // interferers per unit area, >= 0
  double alpha = 4.0;        // path-loss exponent, > 2
  double fading_mean = 1.0;  // fixed at 1
};

NetworkModel make_network(double lambda, double alpha);

/// Throws std::invalid_argument unless lambda >= 0, alpha > 2, fading_mean == 1.
void validate(const NetworkModel& net);

/// Source at the origin, destination at (D, 0), relay at k*D*(cos theta, sin theta).
/// Path gains are cached at construction so downstream formulas stay branch-free.
struct LinkGeometry {
  double source_dest = 0.0;  // D > 0
  double k = 0.0;            // relay distance ratio, > 0
  double theta = 0.0;        // relay angle in [0, 2*pi)
  double alpha = 0.0;        // exponent the gains were derived with

  Vec2 source{0.0, 0.0};
  Vec2 dest{0.0, 0.0};
  Vec2 relay{0.0, 0.0};

  double gain_sd = 0.0;  // l_sd = D^-alpha
  double gain_sr = 0.0;  // l_sr = (kD)^-alpha
  double gain_rd = 0.0;  // l_rd = |relay - dest|^-alpha

  double relay_dest_separation() const { return distance(relay, dest); }
};

/// Builds the geometry and derived gains. Throws std::invalid_argument for
/// D <= 0, k <= 0, theta outside [0, 2*pi), or a relay coincident with the
/// source or destination.
LinkGeometry make_geometry(double source_dest, double k, double theta, double alpha);

/// Per-protocol knobs. `threshold` is the SIR threshold T with attempted rate
/// log2(1+T); `rho_mag` the source-relay correlation magnitude; `wc` the
/// compression noise power for CF; `partitions` the rectangle count N used by
/// the CF bounds.
struct ProtocolParams {
  double threshold = 3.0;  // T > 0
  double rho_mag = 0.0;    // |rho| in [0, 1]; DF requires < 1
  double wc = 0.0;         // W_c >= 0 (0 only for cut-set reuse)
  int partitions = 64;     // N >= 1

  double rate() const { return std::log2(1.0 + threshold); }
};

ProtocolParams make_protocol_params(double threshold, double rho_mag, double wc,
                                    int partitions);

void validate(const ProtocolParams& params);

/// T = 2^R - 1.
inline double threshold_from_rate(double rate) { return std::exp2(rate) - 1.0; }

}  // namespace relaynet
