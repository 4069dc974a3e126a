#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bft/butterfly.hpp"
#include "bft/tensor.hpp"

namespace bft {

// Synthetic classification task: class-conditional Gaussian channel
// patterns with a low-frequency spatial modulation per class. Balanced
// classes, deterministic for a given seed.
struct DemoTask {
  int n_channels = 32;
  int height = 8;
  int width = 8;
  int n_classes = 4;
  int n_samples = 256;
  uint64_t seed = 7;
};

struct Dataset {
  std::vector<FeatureMap> train;
  std::vector<int> train_labels;
  std::vector<FeatureMap> val;
  std::vector<int> val_labels;
};

Dataset make_dataset(const DemoTask& task);

enum class FusionKind { Bft, DensePointwise };

// Two models are trained, identical except for the fusion layer: two
// frozen depthwise-style mixing layers, the fusion layer, global average
// pool, then a linear head. The dense model truncates to fewer channels
// after mixing so its fusion MAC count matches the butterfly's.
struct TrainConfig {
  int epochs = 40;
  double learning_rate = 0.05;
  int decay_epoch = 30;        // constant, then multiplied by decay_factor
  double decay_factor = 0.1;
  double weight_decay = 0.0;   // fusion weights only
  ResidualPolicy residual = ResidualPolicy::FirstToLast;
  int base = 4;
  int batch_size = 32;
  uint64_t seed = 42;
};

struct ModelMetrics {
  FusionKind kind = FusionKind::Bft;
  int fusion_channels = 0;
  int64_t fusion_macs_per_column = 0;
  int64_t trainable_macs_per_sample = 0;  // fusion + head
  std::vector<double> epoch_loss;
  std::vector<double> epoch_train_acc;
  double final_train_acc = 0.0;
  double final_val_acc = 0.0;
  double final_loss = 0.0;
  bool diverged = false;
};

struct DemoResult {
  ModelMetrics bft;
  ModelMetrics dense;

  // Relative gap between the two trainable MAC budgets.
  double mac_gap() const;
  bool any_diverged() const { return bft.diverged || dense.diverged; }
};

DemoResult run_train_demo(const DemoTask& task, const TrainConfig& cfg);

std::string demo_result_to_json(const DemoTask& task, const TrainConfig& cfg,
                                const DemoResult& result);
std::string format_demo_summary(const DemoResult& result);

const char* residual_policy_name(ResidualPolicy policy);
ResidualPolicy residual_policy_from_name(const std::string& name);

}  // namespace bft
