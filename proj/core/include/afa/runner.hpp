#pragma once

#include <filesystem>
#include <iosfwd>

#include "afa/config.hpp"

namespace afa {

// Command implementations shared by the CLI and the acceptance suite. All
// of them throw afa::Error on domain failures; the CLI maps that to exit
// code 1.

// Renders one wave, writes <out>.afat and <out>.pgm, prints `l2=...`.
void run_wave(double f, double omega, int size, const std::filesystem::path& out_base,
              std::ostream& log);

// Augments every .pgm/.ppm/.afat under `input` (file or directory) into
// `out_dir`, writing a manifest.csv of the sampled parameters.
void run_augment(const std::filesystem::path& input, const std::filesystem::path& out_dir,
                 double mean_strength, std::uint64_t seed, bool clamp, std::ostream& log);

// Runs one verification suite (fft | grad | metrics), streaming one JSON
// object per check. Returns true when every check passed.
bool run_verify(const std::string& suite, std::ostream& out);

// Trains per config into out_dir: checkpoint/, epochs.csv, config.resolved.
void run_train(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// Evaluates a checkpoint on the generated corruption suite; optional second
// checkpoint as normalization baseline (defaults to the model itself).
void run_eval(const std::filesystem::path& model_dir, const RunConfig& cfg,
              const std::filesystem::path& out_dir, const std::filesystem::path& baseline_dir,
              std::ostream& log);

// Frequency-sensitivity heatmap for a checkpoint: <out>.afat + <out>.pgm.
void run_heatmap(const std::filesystem::path& model_dir, const RunConfig& cfg,
                 const std::filesystem::path& out_base, std::ostream& log);

// Depth-indexed diagnostic CSV: bn-divergence | weight-norms.
void run_report(const std::filesystem::path& model_dir, const std::string& kind,
                std::ostream& out);

}  // namespace afa
