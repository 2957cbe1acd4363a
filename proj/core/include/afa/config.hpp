#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "afa/corruption.hpp"
#include "afa/dataset.hpp"
#include "afa/train.hpp"

namespace afa {

// Flat key=value run configuration. Unknown keys are rejected; '#' starts a
// comment. Every key has a default except `seed`, which must be given
// explicitly (no wall-clock fallback).
struct RunConfig {
    std::uint64_t seed = 0;
    bool seed_set = false;

    SyntheticSpec dataset;
    nn::TrainMode train_mode = nn::TrainMode::AuxAce;
    AfaConfig afa;
    VisualAugConfig visual;
    std::string loss_mode = "ace";  // ace | ce_jsd
    double jsd_coeff = 10.0;
    nn::SgdConfig optim;
    int epochs = 20;
    int batch_size = 32;
    int threads = 1;

    std::vector<CorruptionKind> eval_kinds = all_corruption_kinds();
    double heatmap_v = 8.0;
    int heatmap_extent = 16;
    int heatmap_trials = 1;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Every key with its resolved value, sorted, preceded by a version comment.
std::string resolved_config_text(const RunConfig& cfg);
void write_resolved_config(const RunConfig& cfg, const std::filesystem::path& path);

nn::TrainSettings train_settings(const RunConfig& cfg);

}  // namespace afa
