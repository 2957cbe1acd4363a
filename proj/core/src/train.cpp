#include "afa/train.hpp"

#include <numeric>

namespace afa::nn {

namespace {

std::vector<std::size_t> shuffled_order(std::size_t count, RngState& rng) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            sample_uniform(rng, 0.0, static_cast<double>(i)));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

}  // namespace

EpochStats train_epoch(Model& model, const Dataset& dataset, const TrainSettings& settings,
                       SgdOptimizer& optim, RngState& rng) {
    if (dataset.images.empty()) {
        raise(Errc::EmptySplit, "cannot train on an empty dataset");
    }
    const std::size_t count = dataset.images.size();
    const std::size_t batch_size = static_cast<std::size_t>(std::max(settings.batch_size, 2));
    const std::vector<std::size_t> order = shuffled_order(count, rng);

    auto params = model.parameters();
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t seen = 0;

    for (std::size_t start = 0; start < count; start += batch_size) {
        const std::size_t end = std::min(start + batch_size, count);
        const std::size_t n = end - start;
        if (n < 2) break;  // batch statistics need at least two samples

        std::vector<int> labels(n);
        std::vector<ImageTensor> main_batch;
        std::vector<ImageTensor> aux_batch;
        std::vector<ImageTensor> aux_batch2;
        main_batch.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const ImageTensor& x = dataset.images[order[start + i]];
            labels[i] = dataset.labels[order[start + i]];
            switch (settings.mode) {
                case TrainMode::Baseline:
                    main_batch.push_back(standard_visual_aug(x, settings.visual, rng));
                    break;
                case TrainMode::AfaMain: {
                    ImageTensor visual = standard_visual_aug(x, settings.visual, rng);
                    main_batch.push_back(afa_augment(visual, settings.afa, rng));
                    break;
                }
                case TrainMode::AuxAce:
                    main_batch.push_back(standard_visual_aug(x, settings.visual, rng));
                    aux_batch.push_back(afa_augment(x, settings.afa, rng));
                    break;
                case TrainMode::AuxJsd:
                    main_batch.push_back(x);
                    aux_batch.push_back(afa_augment(x, settings.afa, rng));
                    aux_batch2.push_back(afa_augment(x, settings.afa, rng));
                    break;
            }
        }

        model.zero_grad();
        double batch_loss = 0.0;
        Tape tape_main;
        const Matrix logits_main = model.forward(main_batch, Branch::Main, true, &tape_main);

        switch (settings.mode) {
            case TrainMode::Baseline:
            case TrainMode::AfaMain: {
                LossValue ce = ce_loss(logits_main, labels);
                batch_loss = ce.value;
                model.backward(tape_main, ce.dlogits);
                break;
            }
            case TrainMode::AuxAce: {
                Tape tape_aux;
                const Matrix logits_aux = model.forward(aux_batch, Branch::Aux, true, &tape_aux);
                AceValue ace = ace_loss(logits_main, logits_aux, labels);
                batch_loss = ace.value;
                model.backward(tape_main, ace.dlogits_main);
                model.backward(tape_aux, ace.dlogits_aux);
                break;
            }
            case TrainMode::AuxJsd: {
                Tape tape_a1;
                Tape tape_a2;
                const Matrix logits_a1 = model.forward(aux_batch, Branch::Aux, true, &tape_a1);
                const Matrix logits_a2 = model.forward(aux_batch2, Branch::Aux, true, &tape_a2);
                LossValue ce = ce_loss(logits_main, labels);
                const Matrix p_clean = softmax(logits_main);
                const Matrix p_a1 = softmax(logits_a1);
                const Matrix p_a2 = softmax(logits_a2);
                JsdValue jsd = jsd_loss_grad(p_clean, p_a1, p_a2);
                batch_loss = ce.value + settings.jsd_coeff * jsd.value;

                Matrix dlogits_clean = softmax_backward(p_clean, jsd.dp_clean);
                for (std::size_t k = 0; k < dlogits_clean.values.size(); ++k) {
                    dlogits_clean.values[k] =
                        ce.dlogits.values[k] + settings.jsd_coeff * dlogits_clean.values[k];
                }
                Matrix dlogits_a1 = softmax_backward(p_a1, jsd.dp_a1);
                Matrix dlogits_a2 = softmax_backward(p_a2, jsd.dp_a2);
                for (double& v : dlogits_a1.values) v *= settings.jsd_coeff;
                for (double& v : dlogits_a2.values) v *= settings.jsd_coeff;

                model.backward(tape_main, dlogits_clean);
                model.backward(tape_a1, dlogits_a1);
                model.backward(tape_a2, dlogits_a2);
                break;
            }
        }
        optim.step(params);

        const std::vector<int> preds = predict(logits_main);
        for (std::size_t i = 0; i < n; ++i) {
            if (preds[i] == labels[i]) ++correct;
        }
        loss_sum += batch_loss * static_cast<double>(n);
        seen += n;
    }

    EpochStats stats;
    stats.loss = seen > 0 ? loss_sum / static_cast<double>(seen) : 0.0;
    stats.accuracy = seen > 0 ? static_cast<double>(correct) / static_cast<double>(seen) : 0.0;
    return stats;
}

TrainMode parse_train_mode(const std::string& name) {
    if (name == "baseline") return TrainMode::Baseline;
    if (name == "afa-main") return TrainMode::AfaMain;
    if (name == "aux" || name == "aux-ace") return TrainMode::AuxAce;
    if (name == "aux-jsd") return TrainMode::AuxJsd;
    raise(Errc::InvalidConfig, "unknown train mode: " + name);
}

std::string train_mode_name(TrainMode mode) {
    switch (mode) {
        case TrainMode::Baseline: return "baseline";
        case TrainMode::AfaMain: return "afa-main";
        case TrainMode::AuxAce: return "aux-ace";
        case TrainMode::AuxJsd: return "aux-jsd";
    }
    return "baseline";
}

}  // namespace afa::nn
