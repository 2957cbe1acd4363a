#include "afa/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "afa/version.hpp"

namespace afa {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    raise(Errc::InvalidConfig, key + " expects true/false, got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(Errc::InvalidConfig, key + " expects a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        raise(Errc::InvalidConfig, key + " expects an integer, got '" + value + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        cfg.seed_set = true;
    } else if (key == "dataset.family") {
        cfg.dataset.family = parse_family(value);
    } else if (key == "dataset.image_size") {
        cfg.dataset.image_size = static_cast<int>(parse_int(key, value));
    } else if (key == "dataset.classes") {
        cfg.dataset.num_classes = static_cast<int>(parse_int(key, value));
    } else if (key == "dataset.samples_per_class") {
        cfg.dataset.samples_per_class = static_cast<int>(parse_int(key, value));
    } else if (key == "dataset.channels") {
        cfg.dataset.channels = static_cast<int>(parse_int(key, value));
    } else if (key == "dataset.noise") {
        cfg.dataset.noise = parse_double(key, value);
    } else if (key == "train.mode") {
        cfg.train_mode = nn::parse_train_mode(value);
    } else if (key == "afa.mean_strength") {
        cfg.afa.mean_strength = parse_double(key, value);
    } else if (key == "afa.per_channel") {
        cfg.afa.per_channel = parse_bool(key, value);
    } else if (key == "afa.clamp") {
        cfg.afa.clamp = parse_bool(key, value);
    } else if (key == "visual.crop_padding") {
        cfg.visual.crop_padding = static_cast<int>(parse_int(key, value));
    } else if (key == "visual.hflip_prob") {
        cfg.visual.hflip_prob = parse_double(key, value);
    } else if (key == "loss.mode") {
        if (value != "ace" && value != "ce_jsd") {
            raise(Errc::InvalidConfig, "loss.mode expects ace|ce_jsd");
        }
        cfg.loss_mode = value;
    } else if (key == "loss.jsd_coeff") {
        cfg.jsd_coeff = parse_double(key, value);
    } else if (key == "optim.lr") {
        cfg.optim.lr = parse_double(key, value);
    } else if (key == "optim.momentum") {
        cfg.optim.momentum = parse_double(key, value);
    } else if (key == "optim.nesterov") {
        cfg.optim.nesterov = parse_bool(key, value);
    } else if (key == "optim.weight_decay") {
        cfg.optim.weight_decay = parse_double(key, value);
    } else if (key == "epochs") {
        cfg.epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "batch_size") {
        cfg.batch_size = static_cast<int>(parse_int(key, value));
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_int(key, value));
    } else if (key == "eval.kinds") {
        cfg.eval_kinds.clear();
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ',')) {
            item = trim(item);
            if (!item.empty()) cfg.eval_kinds.push_back(parse_corruption(item));
        }
        if (cfg.eval_kinds.empty()) {
            raise(Errc::InvalidConfig, "eval.kinds must name at least one corruption");
        }
    } else if (key == "eval.heatmap_v") {
        cfg.heatmap_v = parse_double(key, value);
    } else if (key == "eval.heatmap_extent") {
        cfg.heatmap_extent = static_cast<int>(parse_int(key, value));
    } else if (key == "eval.heatmap_trials") {
        cfg.heatmap_trials = static_cast<int>(parse_int(key, value));
    } else {
        raise(Errc::InvalidConfig, "unknown config key: " + key);
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            raise(Errc::InvalidConfig,
                  "line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
        }
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::IoError, "cannot open config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string resolved_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# " << kToolkitName << ' ' << kToolkitVersion << " resolved configuration\n";
    out << "afa.clamp=" << (cfg.afa.clamp ? "true" : "false") << '\n';
    out << "afa.mean_strength=" << format_double(cfg.afa.mean_strength) << '\n';
    out << "afa.per_channel=" << (cfg.afa.per_channel ? "true" : "false") << '\n';
    out << "batch_size=" << cfg.batch_size << '\n';
    out << "dataset.channels=" << cfg.dataset.channels << '\n';
    out << "dataset.classes=" << cfg.dataset.num_classes << '\n';
    out << "dataset.family=" << family_name(cfg.dataset.family) << '\n';
    out << "dataset.image_size=" << cfg.dataset.image_size << '\n';
    out << "dataset.noise=" << format_double(cfg.dataset.noise) << '\n';
    out << "dataset.samples_per_class=" << cfg.dataset.samples_per_class << '\n';
    out << "epochs=" << cfg.epochs << '\n';
    std::string kinds;
    for (std::size_t i = 0; i < cfg.eval_kinds.size(); ++i) {
        if (i) kinds += ',';
        kinds += corruption_name(cfg.eval_kinds[i]);
    }
    out << "eval.heatmap_extent=" << cfg.heatmap_extent << '\n';
    out << "eval.heatmap_trials=" << cfg.heatmap_trials << '\n';
    out << "eval.heatmap_v=" << format_double(cfg.heatmap_v) << '\n';
    out << "eval.kinds=" << kinds << '\n';
    out << "loss.jsd_coeff=" << format_double(cfg.jsd_coeff) << '\n';
    out << "loss.mode=" << cfg.loss_mode << '\n';
    out << "optim.lr=" << format_double(cfg.optim.lr) << '\n';
    out << "optim.momentum=" << format_double(cfg.optim.momentum) << '\n';
    out << "optim.nesterov=" << (cfg.optim.nesterov ? "true" : "false") << '\n';
    out << "optim.weight_decay=" << format_double(cfg.optim.weight_decay) << '\n';
    out << "seed=" << cfg.seed << '\n';
    out << "threads=" << cfg.threads << '\n';
    out << "train.mode=" << nn::train_mode_name(cfg.train_mode) << '\n';
    out << "visual.crop_padding=" << cfg.visual.crop_padding << '\n';
    out << "visual.hflip_prob=" << format_double(cfg.visual.hflip_prob) << '\n';
    return out.str();
}

void write_resolved_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        raise(Errc::IoError, "cannot write " + path.string());
    }
    out << resolved_config_text(cfg);
}

nn::TrainSettings train_settings(const RunConfig& cfg) {
    nn::TrainSettings settings;
    settings.mode = cfg.train_mode;
    settings.afa = cfg.afa;
    settings.afa.image_size = cfg.dataset.image_size;
    settings.visual = cfg.visual;
    settings.jsd_coeff = cfg.jsd_coeff;
    settings.batch_size = cfg.batch_size;
    if (cfg.loss_mode == "ce_jsd" && cfg.train_mode == nn::TrainMode::AuxAce) {
        settings.mode = nn::TrainMode::AuxJsd;
    }
    return settings;
}

}  // namespace afa
