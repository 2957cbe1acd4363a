#include "afa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace afa {

namespace {

nn::Matrix eval_logits(nn::Model& model, const std::vector<ImageTensor>& images, int batch_size) {
    if (images.empty()) {
        raise(Errc::EmptySplit, "no images to evaluate");
    }
    nn::Matrix all(static_cast<int>(images.size()), model.spec().num_classes);
    std::vector<const ImageTensor*> batch;
    for (std::size_t start = 0; start < images.size();
         start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end =
            std::min(images.size(), start + static_cast<std::size_t>(batch_size));
        batch.clear();
        for (std::size_t i = start; i < end; ++i) batch.push_back(&images[i]);
        const nn::Matrix logits = model.forward(batch, nn::Branch::Main, false);
        for (std::size_t i = start; i < end; ++i) {
            for (int k = 0; k < logits.cols; ++k) {
                all.at(static_cast<int>(i), k) = logits.at(static_cast<int>(i - start), k);
            }
        }
    }
    return all;
}

}  // namespace

std::vector<int> eval_predictions(nn::Model& model, const std::vector<ImageTensor>& images,
                                  int batch_size) {
    return nn::predict(eval_logits(model, images, batch_size));
}

double error_from_predictions(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size() || preds.empty()) {
        raise(Errc::ShapeMismatch, "one label per prediction required");
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] != labels[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(preds.size());
}

double classification_error(nn::Model& model, const std::vector<ImageTensor>& images,
                            const std::vector<int>& labels, int batch_size) {
    return error_from_predictions(eval_predictions(model, images, batch_size), labels);
}

CorruptionErrorTable corruption_error(nn::Model& model, const std::vector<CorruptedSplit>& splits,
                                      const std::vector<int>& labels,
                                      const std::vector<ImageTensor>& clean_images,
                                      int batch_size) {
    if (splits.empty()) {
        raise(Errc::EmptySplit, "no corrupted splits");
    }
    CorruptionErrorTable table;
    table.clean_error = classification_error(model, clean_images, labels, batch_size);
    for (const CorruptedSplit& split : splits) {
        auto row = std::find_if(table.rows.begin(), table.rows.end(),
                                [&](const auto& r) { return r.kind == split.kind; });
        if (row == table.rows.end()) {
            table.rows.push_back({split.kind, {}});
            row = std::prev(table.rows.end());
        }
        row->errors[static_cast<std::size_t>(split.severity - 1)] =
            classification_error(model, split.images, labels, batch_size);
    }
    return table;
}

double mce(const CorruptionErrorTable& table_f, const CorruptionErrorTable& table_baseline) {
    if (table_f.rows.size() != table_baseline.rows.size() || table_f.rows.empty()) {
        raise(Errc::ShapeMismatch, "mCE needs identical corruption grids");
    }
    double acc = 0.0;
    for (const auto& row : table_f.rows) {
        auto base = std::find_if(table_baseline.rows.begin(), table_baseline.rows.end(),
                                 [&](const auto& r) { return r.kind == row.kind; });
        if (base == table_baseline.rows.end()) {
            raise(Errc::ShapeMismatch, "baseline table is missing " + corruption_name(row.kind));
        }
        const double num = std::accumulate(row.errors.begin(), row.errors.end(), 0.0);
        const double den = std::accumulate(base->errors.begin(), base->errors.end(), 0.0);
        if (den <= 0.0) {
            raise(Errc::BaselineDegenerate,
                  "baseline severity sum is zero for " + corruption_name(row.kind));
        }
        acc += num / den;
    }
    return acc / static_cast<double>(table_f.rows.size()) * 100.0;
}

double robust_accuracy(const CorruptionErrorTable& table) {
    if (table.rows.empty()) {
        raise(Errc::EmptySplit, "empty corruption table");
    }
    double acc = 0.0;
    for (const auto& row : table.rows) {
        for (double e : row.errors) acc += 1.0 - e;
    }
    return acc / (static_cast<double>(table.rows.size()) * 5.0) * 100.0;
}

double flip_prob_from_preds(const std::vector<std::vector<int>>& preds, bool temporally_related) {
    if (preds.empty()) {
        raise(Errc::EmptySplit, "no prediction sequences");
    }
    const std::size_t n = preds.front().size();
    if (n < 2) {
        raise(Errc::SequenceTooShort, "sequences need at least two frames");
    }
    std::size_t flips = 0;
    for (const auto& seq : preds) {
        if (seq.size() != n) {
            raise(Errc::ShapeMismatch, "ragged prediction sequences");
        }
        for (std::size_t j = 1; j < n; ++j) {
            const int ref = temporally_related ? seq[j - 1] : seq[0];
            if (seq[j] != ref) ++flips;
        }
    }
    return static_cast<double>(flips) /
           (static_cast<double>(preds.size()) * static_cast<double>(n - 1));
}

double flip_prob(nn::Model& model, const PerturbationSequence& seq, int batch_size) {
    std::vector<std::vector<int>> preds;
    preds.reserve(seq.frames.size());
    for (const auto& frames : seq.frames) {
        preds.push_back(eval_predictions(model, frames, batch_size));
    }
    return flip_prob_from_preds(preds, seq.temporally_related);
}

int t5d_pair_distance(const std::vector<int>& rank_of_cur, const std::vector<int>& rank_of_prev) {
    const int k = static_cast<int>(rank_of_cur.size());
    if (k < 5 || rank_of_prev.size() != rank_of_cur.size()) {
        raise(Errc::NotEnoughClasses, "top-5 distance needs >= 5 ranked classes");
    }
    // class holding each current rank
    std::vector<int> class_at_rank(static_cast<std::size_t>(k) + 1, -1);
    for (int c = 0; c < k; ++c) {
        class_at_rank[static_cast<std::size_t>(rank_of_cur[static_cast<std::size_t>(c)])] = c;
    }
    int d = 0;
    for (int i = 1; i <= 5; ++i) {
        const int klass = class_at_rank[static_cast<std::size_t>(i)];
        const int rho = rank_of_prev[static_cast<std::size_t>(klass)];
        const int lo = std::min(i, rho) + 1;
        const int hi = std::max(i, rho);
        for (int l = lo; l <= hi; ++l) {
            if (1 <= l - 1 && l - 1 <= 5) ++d;
        }
    }
    return d;
}

double t5d_from_rankings(const std::vector<std::vector<std::vector<int>>>& rankings,
                         bool temporally_related) {
    if (rankings.empty()) {
        raise(Errc::EmptySplit, "no ranking sequences");
    }
    const std::size_t n = rankings.front().size();
    if (n < 2) {
        raise(Errc::SequenceTooShort, "sequences need at least two frames");
    }
    double total = 0.0;
    for (const auto& seq : rankings) {
        if (seq.size() != n) {
            raise(Errc::ShapeMismatch, "ragged ranking sequences");
        }
        for (std::size_t j = 1; j < n; ++j) {
            const auto& ref = temporally_related ? seq[j - 1] : seq[0];
            total += t5d_pair_distance(seq[j], ref);
        }
    }
    return total / (static_cast<double>(rankings.size()) * static_cast<double>(n - 1));
}

double t5d(nn::Model& model, const PerturbationSequence& seq, int batch_size) {
    if (model.spec().num_classes < 5) {
        raise(Errc::NotEnoughClasses, "top-5 distance needs >= 5 classes");
    }
    std::vector<std::vector<std::vector<int>>> rankings;
    rankings.reserve(seq.frames.size());
    for (const auto& frames : seq.frames) {
        rankings.push_back(rankings_from_logits(eval_logits(model, frames, batch_size)));
    }
    return t5d_from_rankings(rankings, seq.temporally_related);
}

namespace {

double mean_ratio(const std::map<std::string, double>& f, const std::map<std::string, double>& base,
                  const char* what) {
    if (f.empty() || f.size() != base.size()) {
        raise(Errc::ShapeMismatch, std::string(what) + " needs matching kind sets");
    }
    double acc = 0.0;
    for (const auto& [kind, value] : f) {
        auto it = base.find(kind);
        if (it == base.end()) {
            raise(Errc::ShapeMismatch, std::string(what) + " baseline is missing " + kind);
        }
        if (it->second <= 0.0) {
            raise(Errc::BaselineDegenerate, std::string(what) + " baseline is zero for " + kind);
        }
        acc += value / it->second;
    }
    return acc / static_cast<double>(f.size());
}

}  // namespace

double mfr(const std::map<std::string, double>& fp_f,
           const std::map<std::string, double>& fp_base) {
    return mean_ratio(fp_f, fp_base, "mFR");
}

double mt5d(const std::map<std::string, double>& t5d_f,
            const std::map<std::string, double>& t5d_base) {
    return mean_ratio(t5d_f, t5d_base, "mT5D");
}

std::vector<std::vector<int>> rankings_from_logits(const nn::Matrix& logits) {
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(logits.rows));
    std::vector<int> order(static_cast<std::size_t>(logits.cols));
    for (int i = 0; i < logits.rows; ++i) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return logits.at(i, a) > logits.at(i, b);
        });
        std::vector<int> rank_of(static_cast<std::size_t>(logits.cols));
        for (int r = 0; r < logits.cols; ++r) {
            rank_of[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
        }
        out.push_back(std::move(rank_of));
    }
    return out;
}

}  // namespace afa
