#include "relaynet/model.hpp"

#include <numbers>
#include <string>

namespace relaynet {

double path_loss(double distance, double alpha) {
  if (!(distance > 0.0)) {
    throw std::domain_error("path_loss: distance must be positive, got " +
                            std::to_string(distance));
  }
  if (!(alpha > 2.0)) {
    throw std::domain_error("path_loss: alpha must exceed 2, got " +
                            std::to_string(alpha));
  }
  return std::pow(distance, -alpha);
}

NetworkModel make_network(double lambda, double alpha) {
  NetworkModel net;
  net.lambda = lambda;
  net.alpha = alpha;
  validate(net);
  return net;
}

void validate(const NetworkModel& net) {
  if (!(net.lambda >= 0.0)) {
    throw std::invalid_argument("NetworkModel: lambda must be >= 0");
  }
  if (!(net.alpha > 2.0)) {
    throw std::invalid_argument("NetworkModel: alpha must exceed 2 (got " +
                                std::to_string(net.alpha) + ")");
  }
  if (net.fading_mean != 1.0) {
    throw std::invalid_argument("NetworkModel: fading_mean is fixed at 1");
  }
}

LinkGeometry make_geometry(double source_dest, double k, double theta, double alpha) {
  if (!(source_dest > 0.0)) {
    throw std::invalid_argument("LinkGeometry: source-destination distance must be positive");
  }
  if (!(k > 0.0)) {
    throw std::invalid_argument("LinkGeometry: relay ratio k must be positive "
                                "(k = 0 puts the relay on the source)");
  }
  if (!(theta >= 0.0) || theta >= 2.0 * std::numbers::pi) {
    throw std::invalid_argument("LinkGeometry: theta must lie in [0, 2*pi)");
  }

  LinkGeometry geo;
  geo.source_dest = source_dest;
  geo.k = k;
  geo.theta = theta;
  geo.alpha = alpha;
  geo.source = {0.0, 0.0};
  geo.dest = {source_dest, 0.0};
  geo.relay = {k * source_dest * std::cos(theta), k * source_dest * std::sin(theta)};

  const double rd = distance(geo.relay, geo.dest);
  if (rd <= 1e-12 * source_dest) {
    throw std::invalid_argument("LinkGeometry: relay coincides with the destination");
  }

  geo.gain_sd = path_loss(source_dest, alpha);
  geo.gain_sr = path_loss(k * source_dest, alpha);
  geo.gain_rd = path_loss(rd, alpha);
  return geo;
}

ProtocolParams make_protocol_params(double threshold, double rho_mag, double wc,
                                    int partitions) {
  ProtocolParams p;
  p.threshold = threshold;
  p.rho_mag = rho_mag;
  p.wc = wc;
  p.partitions = partitions;
  validate(p);
  return p;
}

void validate(const ProtocolParams& params) {
  if (!(params.threshold > 0.0)) {
    throw std::invalid_argument("ProtocolParams: threshold T must be positive");
  }
  if (!(params.rho_mag >= 0.0 && params.rho_mag <= 1.0)) {
    throw std::invalid_argument("ProtocolParams: |rho| must lie in [0, 1]");
  }
  if (!(params.wc >= 0.0)) {
    throw std::invalid_argument("ProtocolParams: compression noise W_c must be >= 0");
  }
  if (params.partitions < 1) {
    throw std::invalid_argument("ProtocolParams: partition count N must be >= 1");
  }
}

}  // namespace relaynet
