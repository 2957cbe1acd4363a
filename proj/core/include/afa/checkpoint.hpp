#pragma once

#include <filesystem>

#include "afa/nn.hpp"

namespace afa::nn {

// Checkpoint directory layout: one AFAT tensor per named parameter or
// running statistic, plus a plain-text `model.manifest`. The manifest opens
// with the architecture (input shape, class count, conv blocks) and then
// one line per tensor: `param <name> <file> <dims> <role>` with role one of
// weight | main-affine | aux-affine | stat.
void save_checkpoint(Model& model, const std::filesystem::path& dir);
Model load_checkpoint(const std::filesystem::path& dir);

// FNV-1a over every file the manifest references plus the manifest itself;
// stable across runs for identical checkpoints.
std::uint64_t checkpoint_hash(const std::filesystem::path& dir);

}  // namespace afa::nn
