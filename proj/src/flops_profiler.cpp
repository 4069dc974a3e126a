#include "bft/flops_profiler.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "bft/butterfly.hpp"
#include "json.hpp"

namespace bft {

const char* block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::Conv:      return "conv";
    case BlockKind::Depthwise: return "depthwise";
    case BlockKind::Pointwise: return "pointwise";
    case BlockKind::BftFusion: return "bft_fusion";
    case BlockKind::Fc:        return "fc";
    case BlockKind::Pool:      return "pool";
  }
  return "unknown";
}

BlockKind block_kind_from_name(const std::string& name) {
  if (name == "conv") return BlockKind::Conv;
  if (name == "depthwise") return BlockKind::Depthwise;
  if (name == "pointwise") return BlockKind::Pointwise;
  if (name == "bft_fusion") return BlockKind::BftFusion;
  if (name == "fc") return BlockKind::Fc;
  if (name == "pool") return BlockKind::Pool;
  throw std::invalid_argument("unknown block kind: " + name);
}

int scale_channels(int channels, double multiplier) {
  if (multiplier == 1.0) return channels;
  double scaled = channels * multiplier;
  double rounded = std::nearbyint(scaled);  // ties to even in default mode
  return std::max(8, static_cast<int>(rounded));
}

int64_t FlopReport::total_for(BlockKind kind) const {
  int64_t total = 0;
  for (const auto& b : blocks) {
    if (b.kind == kind) total += b.macs;
  }
  return total;
}

double FlopReport::percent_for(BlockKind kind) const {
  if (total_macs == 0) return 0.0;
  return 100.0 * static_cast<double>(total_for(kind)) /
         static_cast<double>(total_macs);
}

double FlopReport::fusion_share_percent() const {
  if (total_macs == 0) return 0.0;
  int64_t fusion =
      total_for(BlockKind::Pointwise) + total_for(BlockKind::BftFusion);
  return 100.0 * static_cast<double>(fusion) /
         static_cast<double>(total_macs);
}

FlopReport profile(const ArchConfig& arch) {
  if (arch.input_resolution < 1) {
    throw std::invalid_argument("profile: input resolution must be positive");
  }
  if (arch.blocks.empty()) {
    throw std::invalid_argument("profile: architecture has no blocks");
  }
  FlopReport report;
  report.arch_name = arch.name;
  int h = arch.input_resolution;
  int w = arch.input_resolution;
  // Channels tracked at base scale; scaling applies per block. The very
  // first input (image channels) and the FC class count never scale.
  int base_ch = arch.blocks.front().in_ch;
  int scaled_ch = base_ch;
  for (size_t idx = 0; idx < arch.blocks.size(); ++idx) {
    const ArchBlock& blk = arch.blocks[idx];
    if (blk.in_ch != base_ch) {
      throw std::invalid_argument(
          "profile: block " + std::to_string(idx) + " expects " +
          std::to_string(blk.in_ch) + " input channels but saw " +
          std::to_string(base_ch));
    }
    int in_scaled = scaled_ch;
    int out_scaled = blk.kind == BlockKind::Fc
                         ? blk.out_ch
                         : scale_channels(blk.out_ch, arch.width_multiplier);

    int h_out = h, w_out = w;
    BlockCost cost;
    cost.kind = blk.kind;
    cost.in_ch = in_scaled;
    switch (blk.kind) {
      case BlockKind::Conv: {
        if (blk.stride < 1) {
          throw std::invalid_argument("profile: bad stride");
        }
        h_out = (h + blk.stride - 1) / blk.stride;
        w_out = (w + blk.stride - 1) / blk.stride;
        cost.macs = static_cast<int64_t>(h_out) * w_out * blk.kernel *
                    blk.kernel * in_scaled * out_scaled;
        break;
      }
      case BlockKind::Depthwise: {
        if (blk.in_ch != blk.out_ch) {
          throw std::invalid_argument(
              "profile: depthwise block must keep its channel count");
        }
        h_out = (h + blk.stride - 1) / blk.stride;
        w_out = (w + blk.stride - 1) / blk.stride;
        cost.macs = static_cast<int64_t>(h_out) * w_out * blk.kernel *
                    blk.kernel * in_scaled;
        break;
      }
      case BlockKind::Pointwise: {
        cost.macs = static_cast<int64_t>(h) * w * in_scaled * out_scaled;
        break;
      }
      case BlockKind::BftFusion: {
        // Square transform over the wider side of the block.
        int n = std::max(in_scaled, out_scaled);
        ButterflySpec spec = make_uniform_spec(n, arch.bft_base);
        cost.macs = static_cast<int64_t>(h) * w * count_flops(spec);
        break;
      }
      case BlockKind::Fc: {
        cost.macs = static_cast<int64_t>(in_scaled) * out_scaled;
        h_out = w_out = 1;
        break;
      }
      case BlockKind::Pool: {
        cost.macs = 0;
        if (blk.kernel == 0) {
          h_out = w_out = 1;  // global average pool
        } else {
          h_out = (h + blk.stride - 1) / blk.stride;
          w_out = (w + blk.stride - 1) / blk.stride;
        }
        break;
      }
    }
    cost.out_ch = out_scaled;
    cost.h_out = h_out;
    cost.w_out = w_out;
    report.blocks.push_back(cost);
    report.total_macs += cost.macs;
    h = h_out;
    w = w_out;
    base_ch = blk.out_ch;
    scaled_ch = out_scaled;
  }
  return report;
}

double bottleneck_share(const ArchConfig& arch) {
  return profile(arch).fusion_share_percent();
}

namespace {

ArchBlock conv(int in, int out, int stride, int kernel) {
  return {BlockKind::Conv, in, out, stride, kernel};
}
ArchBlock dw(int ch, int stride) {
  return {BlockKind::Depthwise, ch, ch, stride, 3};
}
ArchBlock pw(int in, int out) {
  return {BlockKind::Pointwise, in, out, 1, 1};
}
ArchBlock fc(int in, int out) { return {BlockKind::Fc, in, out, 1, 1}; }
ArchBlock global_pool(int ch) { return {BlockKind::Pool, ch, ch, 1, 0}; }
ArchBlock maxpool(int ch, int stride, int kernel) {
  return {BlockKind::Pool, ch, ch, stride, kernel};
}

}  // namespace

ArchConfig mobilenet_v1(double width_multiplier, int input_resolution) {
  ArchConfig arch;
  arch.name = "mobilenet_v1";
  arch.width_multiplier = width_multiplier;
  arch.input_resolution = input_resolution;
  arch.blocks.push_back(conv(3, 32, 2, 3));
  const int plan[13][3] = {
      // in, out, stride of the depthwise stage
      {32, 64, 1},    {64, 128, 2},   {128, 128, 1},  {128, 256, 2},
      {256, 256, 1},  {256, 512, 2},  {512, 512, 1},  {512, 512, 1},
      {512, 512, 1},  {512, 512, 1},  {512, 512, 1},  {512, 1024, 2},
      {1024, 1024, 1},
  };
  for (const auto& p : plan) {
    arch.blocks.push_back(dw(p[0], p[2]));
    arch.blocks.push_back(pw(p[0], p[1]));
  }
  arch.blocks.push_back(global_pool(1024));
  arch.blocks.push_back(fc(1024, 1000));
  return arch;
}

ArchConfig shufflenet_v2_125(int input_resolution) {
  // Follows the published stage table for the 1.25 width variant
  // literally, including its 1024-wide stage 4. Each two-branch unit is
  // expressed as a chain with zero-cost pool adapters standing in for
  // the concat/split bookkeeping, so every compute block runs at its
  // true width and resolution. The stage-2 fusion blocks with 24 input
  // channels keep their pointwise form in the +BFT variant.
  ArchConfig arch;
  arch.name = "shufflenet_v2_125";
  arch.width_multiplier = 1.0;
  arch.input_resolution = input_resolution;
  arch.blocks.push_back(conv(3, 24, 2, 3));
  arch.blocks.push_back(maxpool(24, 2, 3));
  struct Stage {
    int in, out, repeat;
  };
  const Stage stages[3] = {{24, 128, 3}, {128, 256, 7}, {256, 1024, 3}};
  auto adapter = [](int in, int out) {
    return ArchBlock{BlockKind::Pool, in, out, 1, 1};
  };
  for (const auto& st : stages) {
    int half = st.out / 2;
    bool keep = st.in == 24;
    // Downsampling unit. Right branch: pointwise at the incoming
    // resolution, depthwise stride 2, pointwise.
    arch.blocks.push_back(pw(st.in, half));
    arch.blocks.back().keep_pointwise = keep;
    arch.blocks.push_back(dw(half, 2));
    arch.blocks.push_back(pw(half, half));
    // Left branch: depthwise stride 2 on the full input width, then
    // pointwise down to half. The adapter rewinds the chain's width; the
    // depthwise stride already happened, so this one runs at stride 1.
    arch.blocks.push_back(adapter(half, st.in));
    arch.blocks.push_back(dw(st.in, 1));
    arch.blocks.push_back(pw(st.in, half));
    arch.blocks.back().keep_pointwise = keep;
    for (int r = 0; r < st.repeat; ++r) {
      // Stride-1 unit: half the channels pass through untouched.
      arch.blocks.push_back(pw(half, half));
      arch.blocks.push_back(dw(half, 1));
      arch.blocks.push_back(pw(half, half));
    }
    arch.blocks.push_back(adapter(half, st.out));
  }
  arch.blocks.push_back(pw(1024, 1024));  // final conv; BFT in the +BFT net
  arch.blocks.push_back(global_pool(1024));
  arch.blocks.push_back(fc(1024, 1000));
  return arch;
}

ArchConfig with_fusion(ArchConfig arch, BlockKind fusion_kind) {
  if (fusion_kind != BlockKind::Pointwise &&
      fusion_kind != BlockKind::BftFusion) {
    throw std::invalid_argument("with_fusion: kind must be a fusion kind");
  }
  for (auto& blk : arch.blocks) {
    if (blk.keep_pointwise) continue;
    if (blk.kind == BlockKind::Pointwise || blk.kind == BlockKind::BftFusion) {
      blk.kind = fusion_kind;
    }
  }
  return arch;
}

std::string arch_to_json(const ArchConfig& arch) {
  nlohmann::json j;
  j["name"] = arch.name;
  j["width_multiplier"] = arch.width_multiplier;
  j["input_resolution"] = arch.input_resolution;
  j["bft_base"] = arch.bft_base;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : arch.blocks) {
    nlohmann::json jb = {{"kind", block_kind_name(b.kind)},
                         {"in_ch", b.in_ch},
                         {"out_ch", b.out_ch},
                         {"stride", b.stride},
                         {"kernel", b.kernel}};
    if (b.keep_pointwise) jb["keep_pointwise"] = true;
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  return j.dump(2);
}

ArchConfig arch_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ArchConfig arch;
  arch.name = j.value("name", "custom");
  arch.width_multiplier = j.value("width_multiplier", 1.0);
  arch.input_resolution = j.at("input_resolution").get<int>();
  arch.bft_base = j.value("bft_base", 4);
  for (const auto& b : j.at("blocks")) {
    ArchBlock blk;
    blk.kind = block_kind_from_name(b.at("kind").get<std::string>());
    blk.in_ch = b.at("in_ch").get<int>();
    blk.out_ch = b.at("out_ch").get<int>();
    blk.stride = b.value("stride", 1);
    blk.kernel = b.value("kernel", 1);
    blk.keep_pointwise = b.value("keep_pointwise", false);
    arch.blocks.push_back(blk);
  }
  return arch;
}

std::string report_to_json(const FlopReport& report) {
  nlohmann::json j;
  j["arch"] = report.arch_name;
  j["total_macs"] = report.total_macs;
  j["fusion_share_percent"] = report.fusion_share_percent();
  nlohmann::json by_kind = nlohmann::json::object();
  for (BlockKind kind :
       {BlockKind::Conv, BlockKind::Depthwise, BlockKind::Pointwise,
        BlockKind::BftFusion, BlockKind::Fc, BlockKind::Pool}) {
    by_kind[block_kind_name(kind)] = {
        {"macs", report.total_for(kind)},
        {"percent", report.percent_for(kind)}};
  }
  j["by_kind"] = std::move(by_kind);
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : report.blocks) {
    blocks.push_back({{"kind", block_kind_name(b.kind)},
                      {"macs", b.macs},
                      {"in_ch", b.in_ch},
                      {"out_ch", b.out_ch},
                      {"h_out", b.h_out},
                      {"w_out", b.w_out}});
  }
  j["blocks"] = std::move(blocks);
  return j.dump(2);
}

std::string format_table(const FlopReport& report) {
  std::ostringstream out;
  out << report.arch_name << ": " << report.total_macs << " MACs ("
      << std::fixed << std::setprecision(2)
      << static_cast<double>(report.total_macs) / 1e6 << " M)\n";
  out << std::left << std::setw(12) << "kind" << std::right << std::setw(14)
      << "MACs" << std::setw(10) << "percent" << "\n";
  for (BlockKind kind :
       {BlockKind::Conv, BlockKind::Depthwise, BlockKind::Pointwise,
        BlockKind::BftFusion, BlockKind::Fc, BlockKind::Pool}) {
    int64_t macs = report.total_for(kind);
    if (macs == 0 && kind != BlockKind::Conv) continue;
    out << std::left << std::setw(12) << block_kind_name(kind) << std::right
        << std::setw(14) << macs << std::setw(9) << std::setprecision(2)
        << report.percent_for(kind) << "%\n";
  }
  out << "fusion share: " << std::setprecision(2)
      << report.fusion_share_percent() << "%\n";
  return out.str();
}

}  // namespace bft
