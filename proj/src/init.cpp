#include "bft/init.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bft/rng.hpp"

namespace bft {

double xavier_bound(int n_in, int n_out) {
  if (n_in < 1 || n_out < 1) {
    throw std::invalid_argument("xavier_bound: fan counts must be >= 1, got " +
                                std::to_string(n_in) + " and " +
                                std::to_string(n_out));
  }
  return std::sqrt(6.0 / (n_in + n_out));
}

double butterfly_bound(double xavier, int layers) {
  if (xavier <= 0.0) {
    throw std::invalid_argument("butterfly_bound: xavier bound must be > 0");
  }
  if (layers < 1) {
    throw std::invalid_argument("butterfly_bound: layers must be >= 1, got " +
                                std::to_string(layers));
  }
  double m = static_cast<double>(layers);
  return std::pow(xavier, 1.0 / m) * std::pow(2.0, (m - 1.0) / m);
}

ButterflyWeights init_weights(const ButterflySpec& spec,
                              const InitConfig& cfg) {
  if (cfg.layers != spec.layer_count()) {
    throw std::invalid_argument(
        "init_weights: config has " + std::to_string(cfg.layers) +
        " layers but spec has " + std::to_string(spec.layer_count()));
  }
  ButterflyWeights w(spec);
  if (spec.layer_count() == 0) return w;
  double y = butterfly_bound(xavier_bound(cfg.n_in, cfg.n_out), cfg.layers);
  Rng rng(cfg.seed);
  for (double& v : w.values) v = rng.uniform_sym(y);
  return w;
}

}  // namespace bft
