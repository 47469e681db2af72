#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "alsr/denoiser_model.hpp"

namespace alsr {

enum class CheckpointFormat { Binary, Json };

std::string_view to_string(CheckpointFormat format);
CheckpointFormat checkpoint_format_from_string(std::string_view name);

/// A named tensor; data is row-major.
struct NamedTensor {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<double> data;
};

/// Ordered tensors: "embedding.frequencies", then "layer{i}.weight" [out, in]
/// and "layer{i}.bias" [out] for each layer.
std::vector<NamedTensor> to_named_tensors(const MlpDenoiser& model);
MlpDenoiser from_named_tensors(const std::vector<NamedTensor>& tensors);

/// Binary layout (little-endian): "ALSRCKPT", u32 version = 1, u32 tensor count,
/// then per tensor: u32 name length, name bytes, u32 rank, u64 dims[rank], f64 data.
/// JSON layout: {"format": "alsr-checkpoint", "version": 1, "tensors": [{name, shape, data}]}.
void save_checkpoint(const MlpDenoiser& model, const std::filesystem::path& path, CheckpointFormat format);

/// Detects the format from the leading bytes.
MlpDenoiser load_checkpoint(const std::filesystem::path& path);

}  // namespace alsr
