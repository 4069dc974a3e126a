#pragma once

#include <cstdint>

#include "bft/butterfly.hpp"

namespace bft {

// Inputs for butterfly-aware weight initialization. `layers` must match
// the spec's layer count; the derivation treats every entry of the
// materialized matrix as a product of `layers` independent edges, so the
// per-edge range is chosen from that exponent, not from the radix.
struct InitConfig {
  int n_in = 1;
  int n_out = 1;
  int layers = 1;
  uint64_t seed = 0;
};

// sqrt(6 / (n_in + n_out)), the uniform fan bound for a dense layer.
double xavier_bound(int n_in, int n_out);

// Per-edge bound y with (y/2)^layers == x/2: a path product of `layers`
// uniform(-y, y) edges has the same expected magnitude x/2 as a dense
// weight drawn uniform(-x, x).
double butterfly_bound(double xavier, int layers);

// Every weight i.i.d. uniform on the open interval (-y, y), drawn from
// Rng(seed) in storage order. Same seed, same weights, bit for bit.
ButterflyWeights init_weights(const ButterflySpec& spec,
                              const InitConfig& cfg);

}  // namespace bft
