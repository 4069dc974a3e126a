#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bft {

// Block kinds for architecture-level MAC accounting. One MAC counts as
// one FLOP throughout, matching the usual mult-add convention for
// reported CNN budgets.
enum class BlockKind { Conv, Depthwise, Pointwise, BftFusion, Fc, Pool };

const char* block_kind_name(BlockKind kind);
BlockKind block_kind_from_name(const std::string& name);

// Pool blocks cost zero MACs. Kernel 0 is a global pool collapsing the
// spatial extent to 1x1; a pool whose out_ch differs from in_ch is
// concat/split bookkeeping, used to express multi-branch units as a
// chain. keep_pointwise marks fusion blocks that with_fusion must leave
// alone.
struct ArchBlock {
  BlockKind kind = BlockKind::Conv;
  int in_ch = 0;
  int out_ch = 0;
  int stride = 1;
  int kernel = 1;
  bool keep_pointwise = false;
};

// Block-by-block architecture description. Channel counts are the base
// architecture's; the width multiplier is applied at profile time
// (round to nearest even integer, minimum 8). The first block's input
// channels and the FC output count never scale.
struct ArchConfig {
  std::string name;
  double width_multiplier = 1.0;
  int input_resolution = 224;
  int bft_base = 4;  // radix for BftFusion blocks
  std::vector<ArchBlock> blocks;
};

struct BlockCost {
  BlockKind kind = BlockKind::Conv;
  int64_t macs = 0;
  int in_ch = 0;
  int out_ch = 0;
  int h_out = 0;
  int w_out = 0;
};

struct FlopReport {
  std::string arch_name;
  std::vector<BlockCost> blocks;
  int64_t total_macs = 0;

  int64_t total_for(BlockKind kind) const;
  double percent_for(BlockKind kind) const;
  // Share of MACs spent in channel fusion (pointwise + bft blocks).
  double fusion_share_percent() const;
};

// MAC formulas, with spatial sizes propagated via ceil(h / stride):
//   conv:      h_out * w_out * kernel^2 * in * out
//   depthwise: h_out * w_out * kernel^2 * channels
//   pointwise: h * w * in * out
//   bft:       h * w * count_flops(n = max(in, out), base)
//   fc:        in * out
//   pool:      0
FlopReport profile(const ArchConfig& arch);

double bottleneck_share(const ArchConfig& arch);

// Width-multiplier channel rounding: nearest even integer, minimum 8.
int scale_channels(int channels, double multiplier);

ArchConfig mobilenet_v1(double width_multiplier, int input_resolution);
// The interpolated ShuffleNetV2-1.25 stage table with a BFT final conv.
// Its stage-4 width follows the published table literally (1024), which
// mixes stage and final-conv widths; see README.
ArchConfig shufflenet_v2_125(int input_resolution);

// Swap every pointwise fusion block for a BFT block (or back).
ArchConfig with_fusion(ArchConfig arch, BlockKind fusion_kind);

std::string arch_to_json(const ArchConfig& arch);
ArchConfig arch_from_json(const std::string& text);
std::string report_to_json(const FlopReport& report);
std::string format_table(const FlopReport& report);

}  // namespace bft
