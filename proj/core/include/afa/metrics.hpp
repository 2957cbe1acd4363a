#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "afa/corruption.hpp"
#include "afa/nn.hpp"

namespace afa {

// Classification errors per corruption at the five severities, plus the
// clean error of the same model.
struct CorruptionErrorTable {
    struct Row {
        CorruptionKind kind = CorruptionKind::GaussianNoise;
        std::array<double, 5> errors{};  // index severity-1
    };
    std::vector<Row> rows;
    double clean_error = 0.0;
};

// Evaluation-mode predictions through the main branch, in fixed batches.
std::vector<int> eval_predictions(nn::Model& model, const std::vector<ImageTensor>& images,
                                  int batch_size = 64);

// Misclassified fraction of a prediction list.
double error_from_predictions(const std::vector<int>& preds, const std::vector<int>& labels);

double classification_error(nn::Model& model, const std::vector<ImageTensor>& images,
                            const std::vector<int>& labels, int batch_size = 64);

// Error grid over pre-generated corrupted splits; every split must cover the
// same image list as `labels`.
CorruptionErrorTable corruption_error(nn::Model& model, const std::vector<CorruptedSplit>& splits,
                                      const std::vector<int>& labels,
                                      const std::vector<ImageTensor>& clean_images,
                                      int batch_size = 64);

// mean over corruptions of (severity-sum of model errors / severity-sum of
// baseline errors), times 100. Both tables must cover the same kinds.
double mce(const CorruptionErrorTable& table_f, const CorruptionErrorTable& table_baseline);

// 100 * mean over all (kind, severity) cells of (1 - error).
double robust_accuracy(const CorruptionErrorTable& table);

// Flip probability over m x n predictions: fraction of frames j >= 2 whose
// prediction differs from the reference (previous frame when the kind is
// temporally related, first frame otherwise).
double flip_prob_from_preds(const std::vector<std::vector<int>>& preds, bool temporally_related);
double flip_prob(nn::Model& model, const PerturbationSequence& seq, int batch_size = 64);

// Rank-displacement distance between consecutive top-5 rankings. `rank_of`
// maps class -> rank (1-based, over all classes). For the class at each of
// the current frame's top-5 ranks i, counts the rank positions between i and
// its previous rank that fall inside the top-6 window.
int t5d_pair_distance(const std::vector<int>& rank_of_cur, const std::vector<int>& rank_of_prev);

// Mean pair distance over m(n-1) consecutive pairs, same reference-frame
// rule as flip_prob. Requires at least 5 classes.
double t5d_from_rankings(const std::vector<std::vector<std::vector<int>>>& rankings,
                         bool temporally_related);
double t5d(nn::Model& model, const PerturbationSequence& seq, int batch_size = 64);

// Ratios against a baseline, averaged over kinds.
double mfr(const std::map<std::string, double>& fp_f, const std::map<std::string, double>& fp_base);
double mt5d(const std::map<std::string, double>& t5d_f,
            const std::map<std::string, double>& t5d_base);

// Full rankings (class -> 1-based rank) for each row of a logits matrix;
// ties resolve to the lower class index.
std::vector<std::vector<int>> rankings_from_logits(const nn::Matrix& logits);

}  // namespace afa
