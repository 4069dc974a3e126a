#pragma once

#include <string>
#include <vector>

#include "bft/butterfly.hpp"

namespace bft {

// One binary container for every weight kind. Layout, all little-endian:
//
//   magic[5] | u32 n | u32 m | u32 aux[m] | u32 scalar_width | payload
//
// The magic carries the kind tag: "BFTW1" butterfly, "BFTC1" circulant,
// "BFTL1" low-rank, "BFTF1" fastfood. For butterfly files m is the layer
// count and aux is the radix list; payload is the flat weight array in
// storage order. Low-rank files use aux = {rank} with payload U then V;
// circulant payload is the first row; fastfood payload is S, G, B then
// the permutation stored as integral doubles. scalar_width is 32 or 64.
// A JSON sidecar at <path>.json mirrors the header.
enum class WeightKind { Butterfly, Circulant, LowRank, Fastfood };

struct WeightFile {
  WeightKind kind = WeightKind::Butterfly;
  int n = 0;
  std::vector<int> aux;
  int scalar_width = 64;
  std::vector<double> values;
};

void save_weight_file(const std::string& path, const WeightFile& file);
WeightFile load_weight_file(const std::string& path);

void save_butterfly_weights(const std::string& path,
                            const ButterflyWeights& wts,
                            int scalar_width = 64);
ButterflyWeights load_butterfly_weights(const std::string& path);

const char* weight_kind_name(WeightKind kind);

}  // namespace bft
