#include "afa/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "afa/checkpoint.hpp"
#include "afa/heatmap.hpp"
#include "afa/pnm.hpp"
#include "afa/tensor_io.hpp"
#include "afa/verify.hpp"
#include "afa/version.hpp"

namespace afa {

namespace {

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void require_seed(const RunConfig& cfg) {
    if (!cfg.seed_set) {
        raise(Errc::InvalidConfig, "a seed is required (config key `seed=`); there is no "
                                   "wall-clock default");
    }
}

SyntheticSpec dataset_spec(const RunConfig& cfg) {
    SyntheticSpec spec = cfg.dataset;
    spec.seed = detail::mix64(cfg.seed ^ fnv1a("dataset"));
    return spec;
}

void write_run_metadata(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_resolved_config(cfg, out_dir / "config.resolved");
    std::ofstream version(out_dir / "VERSION", std::ios::trunc);
    version << kToolkitName << ' ' << kToolkitVersion << '\n';
}

}  // namespace

void run_wave(double f, double omega, int size, const std::filesystem::path& out_base,
              std::ostream& log) {
    const RealGrid grid = make_wave(f, omega, size);
    std::vector<float> values(grid.values.begin(), grid.values.end());
    write_tensor(out_base.string() + ".afat",
                 Tensor({static_cast<std::uint32_t>(size), static_cast<std::uint32_t>(size)},
                        std::move(values)));
    write_pgm_autoscale(out_base.string() + ".pgm", grid);
    double norm = 0.0;
    for (double v : grid.values) norm += v * v;
    char line[64];
    std::snprintf(line, sizeof(line), "l2=%.6f\n", std::sqrt(norm));
    log << line;
}

void run_augment(const std::filesystem::path& input, const std::filesystem::path& out_dir,
                 double mean_strength, std::uint64_t seed, bool clamp, std::ostream& log) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(input)) {
        for (const auto& entry : std::filesystem::directory_iterator(input)) {
            const auto ext = entry.path().extension();
            if (ext == ".pgm" || ext == ".ppm" || ext == ".afat") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    if (files.empty()) {
        raise(Errc::EmptySplit, "no .pgm/.ppm/.afat inputs under " + input.string());
    }

    std::filesystem::create_directories(out_dir);
    std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
    const char* names[3] = {"R", "G", "B"};
    bool header_written = false;

    const RngState root(seed);
    for (std::size_t index = 0; index < files.size(); ++index) {
        const auto& file = files[index];
        ImageTensor img;
        if (file.extension() == ".afat") {
            img = ImageTensor::from_tensor(read_tensor(file), false);
            for (float v : img.values()) {
                if (v < 0.0f || v > 1.0f) {
                    raise(Errc::InvalidParam,
                          "tensor image values must already lie in [0,1]: " + file.string());
                }
            }
            img.set_clamped(true);
        } else {
            img = read_pgm_ppm(file);
        }

        if (!header_written) {
            manifest << "index";
            for (int c = 0; c < img.channels(); ++c) {
                manifest << ",f_" << names[c] << ",omega_" << names[c] << ",sigma_" << names[c];
            }
            manifest << '\n';
            header_written = true;
        }

        AfaConfig cfg;
        cfg.mean_strength = mean_strength;
        cfg.image_size = img.width();
        cfg.clamp = clamp;
        RngState stream = root.split(index);
        std::vector<ChannelDraw> draws;
        const ImageTensor augmented = afa_augment(img, cfg, stream, &draws);

        manifest << index;
        for (const ChannelDraw& d : draws) {
            manifest << ',' << fmt_value(d.f) << ',' << fmt_value(d.omega) << ','
                     << fmt_value(d.sigma);
        }
        manifest << '\n';

        const auto out_path = out_dir / file.filename();
        if (file.extension() == ".afat") {
            write_tensor(out_path, augmented.to_tensor());
        } else {
            write_pgm_ppm(out_path, augmented);
        }
    }
    log << "augmented " << files.size() << " image(s) into " << out_dir.string() << "\n";
}

bool run_verify(const std::string& suite, std::ostream& out) {
    std::vector<CheckResult> results;
    if (suite == "fft") {
        results = verify_fft_suite();
    } else if (suite == "grad") {
        results = verify_grad_suite();
    } else if (suite == "metrics") {
        results = verify_metrics_suite();
    } else {
        raise(Errc::InvalidConfig, "unknown verify suite: " + suite);
    }
    for (const CheckResult& r : results) {
        nlohmann::json line = {{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}};
        out << line.dump() << '\n';
    }
    return all_passed(results);
}

void run_train(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    require_seed(cfg);
    write_run_metadata(cfg, out_dir);

    auto [train, test] = synth_dataset(dataset_spec(cfg));
    nn::ModelSpec spec = nn::ModelSpec::small_cnn(cfg.dataset.channels, cfg.dataset.image_size,
                                                  cfg.dataset.num_classes);
    nn::Model model(spec, detail::mix64(cfg.seed ^ fnv1a("init")));
    nn::SgdOptimizer optim(cfg.optim);
    const nn::TrainSettings settings = train_settings(cfg);
    RngState rng = RngState(cfg.seed).split(fnv1a("train"));

    std::ofstream epochs_csv(out_dir / "epochs.csv", std::ios::trunc);
    epochs_csv << "epoch,loss,accuracy\n";
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const nn::EpochStats stats = nn::train_epoch(model, train, settings, optim, rng);
        epochs_csv << epoch << ',' << fmt_value(stats.loss) << ',' << fmt_value(stats.accuracy)
                   << '\n';
        log << "epoch " << epoch << "/" << cfg.epochs << " loss=" << fmt_value(stats.loss)
            << " acc=" << fmt_value(stats.accuracy) << "\n";
    }
    save_checkpoint(model, out_dir / "checkpoint");

    const double test_error = classification_error(model, test.images, test.labels);
    log << "clean test accuracy " << fmt_value(100.0 * (1.0 - test_error)) << "%\n";
}

void run_eval(const std::filesystem::path& model_dir, const RunConfig& cfg,
              const std::filesystem::path& out_dir, const std::filesystem::path& baseline_dir,
              std::ostream& log) {
    require_seed(cfg);
    write_run_metadata(cfg, out_dir);

    nn::Model model = nn::load_checkpoint(model_dir);
    auto [train, test] = synth_dataset(dataset_spec(cfg));
    (void)train;

    const RngState corrupt_rng = RngState(cfg.seed).split(fnv1a("corrupt"));
    const auto corrupted =
        generate_corruptions(test, cfg.eval_kinds, corrupt_rng, cfg.threads);
    const CorruptionErrorTable table =
        corruption_error(model, corrupted, test.labels, test.images);

    CorruptionErrorTable base_table = table;
    bool self_baseline = baseline_dir.empty();
    nn::Model baseline = self_baseline ? model : nn::load_checkpoint(baseline_dir);
    if (!self_baseline) {
        base_table = corruption_error(baseline, corrupted, test.labels, test.images);
    }

    std::ofstream errors_csv(out_dir / "corruption_errors.csv", std::ios::trunc);
    errors_csv << "metric,kind,severity,value\n";
    for (const auto& row : table.rows) {
        for (int s = 1; s <= 5; ++s) {
            errors_csv << "error," << corruption_name(row.kind) << ',' << s << ','
                       << fmt_value(row.errors[static_cast<std::size_t>(s - 1)]) << '\n';
        }
    }

    const RngState seq_rng = RngState(cfg.seed).split(fnv1a("sequence"));
    std::map<std::string, double> fp_f;
    std::map<std::string, double> fp_b;
    std::map<std::string, double> td_f;
    std::map<std::string, double> td_b;
    const bool rankable = model.spec().num_classes >= 5;
    for (CorruptionKind kind : cfg.eval_kinds) {
        const PerturbationSequence seq = build_perturbation_sequence(test, kind, seq_rng);
        fp_f[corruption_name(kind)] = flip_prob(model, seq);
        fp_b[corruption_name(kind)] = self_baseline ? fp_f[corruption_name(kind)]
                                                    : flip_prob(baseline, seq);
        if (rankable) {
            td_f[corruption_name(kind)] = t5d(model, seq);
            td_b[corruption_name(kind)] = self_baseline ? td_f[corruption_name(kind)]
                                                        : t5d(baseline, seq);
        }
    }

    std::ofstream summary(out_dir / "summary.csv", std::ios::trunc);
    summary << "metric,kind,severity,value\n";
    summary << "clean_error,all,0," << fmt_value(table.clean_error) << '\n';
    summary << "mce,all,0," << fmt_value(mce(table, base_table)) << '\n';
    summary << "ra,all,0," << fmt_value(robust_accuracy(table)) << '\n';
    summary << "mfr,all,0," << fmt_value(mfr(fp_f, fp_b)) << '\n';
    if (rankable) {
        summary << "mt5d,all,0," << fmt_value(mt5d(td_f, td_b)) << '\n';
    }
    for (const auto& [kind, value] : fp_f) {
        summary << "fp," << kind << ",0," << fmt_value(value) << '\n';
    }
    for (const auto& [kind, value] : td_f) {
        summary << "t5d," << kind << ",0," << fmt_value(value) << '\n';
    }

    log << "mce=" << fmt_value(mce(table, base_table))
        << " ra=" << fmt_value(robust_accuracy(table))
        << " clean_error=" << fmt_value(table.clean_error) << "\n";
}

void run_heatmap(const std::filesystem::path& model_dir, const RunConfig& cfg,
                 const std::filesystem::path& out_base, std::ostream& log) {
    require_seed(cfg);
    nn::Model model = nn::load_checkpoint(model_dir);
    auto [train, test] = synth_dataset(dataset_spec(cfg));
    (void)train;

    HeatmapSpec spec;
    spec.extent = cfg.heatmap_extent;
    spec.v = cfg.heatmap_v;
    spec.trials = cfg.heatmap_trials;
    const RngState rng = RngState(cfg.seed).split(fnv1a("heatmap"));
    const HeatmapResult result =
        fourier_heatmap(model, test.images, test.labels, spec, rng, cfg.threads);

    std::vector<float> values(result.errors.values.begin(), result.errors.values.end());
    write_tensor(out_base.string() + ".afat",
                 Tensor({static_cast<std::uint32_t>(result.errors.height),
                         static_cast<std::uint32_t>(result.errors.width)},
                        std::move(values)));
    const auto [lo, hi] = write_pgm_autoscale(out_base.string() + ".pgm", result.errors);
    log << "heatmap extent " << result.extent << ", clean_error "
        << fmt_value(result.clean_error) << ", pgm scale min " << fmt_value(lo) << " max "
        << fmt_value(hi) << "\n";
}

void run_report(const std::filesystem::path& model_dir, const std::string& kind,
                std::ostream& out) {
    nn::Model model = nn::load_checkpoint(model_dir);
    if (kind == "bn-divergence") {
        out << "depth,weight_mad,bias_mad\n";
        for (const auto& row : model.bn_divergence_report()) {
            out << row.depth << ',' << fmt_value(row.weight_mad) << ','
                << fmt_value(row.bias_mad) << '\n';
        }
    } else if (kind == "weight-norms") {
        out << "depth,norm\n";
        for (const auto& row : model.weight_norm_report()) {
            out << row.depth << ',' << fmt_value(row.norm) << '\n';
        }
    } else {
        raise(Errc::InvalidConfig, "unknown report kind: " + kind);
    }
}

}  // namespace afa
