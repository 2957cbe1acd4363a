// Command-line front end: wave rendering, augmentation, training, the
// corruption/consistency evaluation suite, frequency heatmaps, diagnostics
// and the verification oracles. Exit codes: 0 success, 1 domain/runtime
// error, 2 usage error.

#include <iostream>

#include <CLI11.hpp>

#include "afa/runner.hpp"
#include "afa/version.hpp"

namespace {

afa::RunConfig load_run_config(const std::string& path, std::uint64_t seed_flag, bool seed_given) {
    afa::RunConfig cfg = path.empty() ? afa::RunConfig{} : afa::load_config(path);
    if (seed_given) {
        cfg.seed = seed_flag;
        cfg.seed_set = true;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(afa::kToolkitName) + " " + afa::kToolkitVersion};
    app.require_subcommand(1);

    // wave
    double wave_f = 1.0;
    double wave_omega = 0.0;
    int wave_size = 32;
    std::string wave_out;
    auto* wave = app.add_subcommand("wave", "Render one unit-norm planar wave");
    wave->add_option("--f", wave_f, "Frequency in cycles per image")->required();
    wave->add_option("--omega", wave_omega, "Direction in radians, [0, pi)")->required();
    wave->add_option("--size", wave_size, "Image size M");
    wave->add_option("--out", wave_out, "Output basename (.afat and .pgm)")->required();

    // augment
    std::string aug_in;
    std::string aug_out;
    double aug_strength = 10.0;
    std::uint64_t aug_seed = 0;
    bool aug_no_clamp = false;
    auto* augment = app.add_subcommand("augment", "Additive wave augmentation over images");
    augment->add_option("--in", aug_in, "Input file or directory (.pgm/.ppm/.afat)")->required();
    augment->add_option("--out", aug_out, "Output directory")->required();
    augment->add_option("--mean-strength", aug_strength, "Mean of the strength distribution");
    augment->add_option("--seed", aug_seed, "Stream seed")->required();
    augment->add_flag("--no-clamp", aug_no_clamp, "Skip the [0,1] clamp");

    // verify
    std::string verify_suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", verify_suite, "fft | grad | metrics")
        ->required()
        ->check(CLI::IsMember({"fft", "grad", "metrics"}));

    // train / eval / heatmap / report
    std::string config_path;
    std::string out_dir;
    std::string model_dir;
    std::string baseline_dir;
    std::uint64_t seed_flag = 0;

    auto* train = app.add_subcommand("train", "Train per config");
    train->add_option("--config", config_path, "key=value config file")->required();
    train->add_option("--out-dir", out_dir, "Output directory")->required();
    auto* train_seed = train->add_option("--seed", seed_flag, "Override the config seed");

    auto* eval = app.add_subcommand("eval", "Corruption / consistency evaluation");
    eval->add_option("--model", model_dir, "Checkpoint directory")->required();
    eval->add_option("--config", config_path, "key=value config file")->required();
    eval->add_option("--out-dir", out_dir, "Output directory")->required();
    eval->add_option("--baseline", baseline_dir, "Baseline checkpoint (defaults to --model)");
    auto* eval_seed = eval->add_option("--seed", seed_flag, "Override the config seed");

    double heat_v = -1.0;
    int heat_extent = -1;
    std::string heat_out;
    auto* heatmap = app.add_subcommand("heatmap", "Frequency-sensitivity error grid");
    heatmap->add_option("--model", model_dir, "Checkpoint directory")->required();
    heatmap->add_option("--config", config_path, "key=value config file")->required();
    heatmap->add_option("--v", heat_v, "Perturbation norm (overrides config)");
    heatmap->add_option("--grid", heat_extent, "Half-plane extent (overrides config)");
    heatmap->add_option("--out", heat_out, "Output basename (.afat and .pgm)")->required();
    auto* heat_seed = heatmap->add_option("--seed", seed_flag, "Override the config seed");

    std::string report_kind;
    auto* report = app.add_subcommand("report", "Model diagnostics CSV");
    report->add_option("--model", model_dir, "Checkpoint directory")->required();
    report->add_option("kind", report_kind, "bn-divergence | weight-norms")
        ->required()
        ->check(CLI::IsMember({"bn-divergence", "weight-norms"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (wave->parsed()) {
            afa::run_wave(wave_f, wave_omega, wave_size, wave_out, std::cout);
        } else if (augment->parsed()) {
            afa::run_augment(aug_in, aug_out, aug_strength, aug_seed, !aug_no_clamp, std::cout);
        } else if (verify->parsed()) {
            if (!afa::run_verify(verify_suite, std::cout)) {
                std::cerr << "verify: suite " << verify_suite << " failed\n";
                return 1;
            }
        } else if (train->parsed()) {
            afa::run_train(load_run_config(config_path, seed_flag, !train_seed->empty()), out_dir,
                           std::cout);
        } else if (eval->parsed()) {
            afa::run_eval(model_dir, load_run_config(config_path, seed_flag, !eval_seed->empty()),
                          out_dir, baseline_dir, std::cout);
        } else if (heatmap->parsed()) {
            afa::RunConfig cfg = load_run_config(config_path, seed_flag, !heat_seed->empty());
            if (heat_v >= 0.0) cfg.heatmap_v = heat_v;
            if (heat_extent >= 0) cfg.heatmap_extent = heat_extent;
            afa::run_heatmap(model_dir, cfg, heat_out, std::cout);
        } else if (report->parsed()) {
            afa::run_report(model_dir, report_kind, std::cout);
        }
    } catch (const afa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
