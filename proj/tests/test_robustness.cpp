#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "afa/augment.hpp"
#include "afa/heatmap.hpp"
#include "afa/metrics.hpp"
#include "support/test_util.hpp"

using namespace afa;
using testsupport::thrown_code;

namespace {

Dataset small_dataset(int count, int size, int classes, std::uint64_t seed) {
    Dataset data;
    data.split = "test";
    RngState rng(seed);
    for (int i = 0; i < count; ++i) {
        data.images.push_back(testsupport::random_image(rng, 3, size));
        data.labels.push_back(i % classes);
    }
    return data;
}

// Literal transcription of the flip double sum, kept here as the test-side
// oracle for the vectorized implementation.
double flip_prob_oracle(const std::vector<std::vector<int>>& preds, bool related) {
    const std::size_t m = preds.size();
    const std::size_t n = preds.front().size();
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 2; j <= n; ++j) {
            const int ref = related ? preds[i][j - 2] : preds[i][0];
            total += preds[i][j - 1] != ref ? 1.0 : 0.0;
        }
    }
    return total / (static_cast<double>(m) * static_cast<double>(n - 1));
}

// Literal transcription of the top-5 rank displacement double sum.
int t5d_oracle(const std::vector<int>& rank_cur, const std::vector<int>& rank_prev) {
    int d = 0;
    for (int i = 1; i <= 5; ++i) {
        int klass = -1;
        for (std::size_t c = 0; c < rank_cur.size(); ++c) {
            if (rank_cur[c] == i) klass = static_cast<int>(c);
        }
        REQUIRE(klass >= 0);
        const int rho = rank_prev[static_cast<std::size_t>(klass)];
        for (int l = std::min(i, rho) + 1; l <= std::max(i, rho); ++l) {
            if (1 <= l - 1 && l - 1 <= 5) ++d;
        }
    }
    return d;
}

std::vector<int> ranking_of(const std::vector<int>& order) {
    std::vector<int> rank_of(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank_of[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
    }
    return rank_of;
}

}  // namespace

TEST_CASE("gaussian severity strictly increases the mean per-pixel change") {
    const Dataset data = small_dataset(10, 16, 4, 2);
    const RngState rng(77);
    double previous = 0.0;
    for (int severity = 1; severity <= 5; ++severity) {
        double mean_abs = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < data.images.size(); ++i) {
            RngState stream = rng.split(static_cast<std::uint64_t>(severity) * 1000 + i);
            const ImageTensor noisy =
                apply_corruption(data.images[i], CorruptionKind::GaussianNoise, severity, stream);
            for (std::size_t k = 0; k < noisy.values().size(); ++k) {
                mean_abs += std::abs(noisy.values()[k] - data.images[i].values()[k]);
                ++count;
            }
        }
        mean_abs /= static_cast<double>(count);
        CHECK(mean_abs > previous);
        previous = mean_abs;
    }
}

TEST_CASE("every severity table is strictly monotone in strength") {
    for (CorruptionKind kind : all_corruption_kinds()) {
        const auto& table = severity_table(kind);
        for (int s = 1; s < 5; ++s) {
            // contrast gain and shot photon count decrease as severity grows
            if (kind == CorruptionKind::Contrast || kind == CorruptionKind::ShotNoise) {
                CHECK(table[s] < table[s - 1]);
            } else {
                CHECK(table[s] > table[s - 1]);
            }
        }
    }
}

TEST_CASE("planar-wave corruption shares the additive wave code path") {
    const Dataset data = small_dataset(3, 16, 3, 3);
    const RngState root(123);
    for (int severity : {1, 4}) {
        for (std::size_t i = 0; i < data.images.size(); ++i) {
            // the corruption derives stream (kind, severity, index); replay it
            const std::uint64_t key =
                (static_cast<std::uint64_t>(CorruptionKind::PlanarWave) << 40) ^
                (static_cast<std::uint64_t>(severity) << 32) ^ static_cast<std::uint64_t>(i);
            RngState stream = root.split(key);
            const ImageTensor corrupted =
                apply_corruption(data.images[i], CorruptionKind::PlanarWave, severity, stream);

            RngState replay = root.split(key);
            ImageTensor expected = data.images[i];
            const double sigma = severity_table(CorruptionKind::PlanarWave)[severity - 1];
            for (int c = 0; c < 3; ++c) {
                auto [f, omega] = sample_basis(replay, 16);
                expected = add_wave(expected, c, make_wave(f, omega, 16), sigma, true);
            }
            CHECK(corrupted.values() == expected.values());
        }
    }
}

TEST_CASE("corruption generation is bit-identical under the same seed") {
    const Dataset data = small_dataset(4, 16, 2, 5);
    const RngState rng(9);
    const auto a = generate_corruptions(data, all_corruption_kinds(), rng);
    const auto b = generate_corruptions(data, all_corruption_kinds(), rng, 4);
    REQUIRE(a.size() == b.size());
    CHECK(a.size() == all_corruption_kinds().size() * 5);
    for (std::size_t s = 0; s < a.size(); ++s) {
        REQUIRE(a[s].images.size() == b[s].images.size());
        for (std::size_t i = 0; i < a[s].images.size(); ++i) {
            CHECK(a[s].images[i].values() == b[s].images[i].values());
        }
    }
}

TEST_CASE("unknown corruption names are rejected") {
    CHECK(thrown_code([] { parse_corruption("fog_3d"); }) == Errc::UnknownCorruption);
    for (CorruptionKind kind : all_corruption_kinds()) {
        CHECK(parse_corruption(corruption_name(kind)) == kind);
    }
}

TEST_CASE("prediction-level error: perfect and constant predictors") {
    const std::vector<int> labels = {0, 1, 2, 3, 0, 1, 2, 3};
    CHECK(error_from_predictions(labels, labels) == 0.0);
    const std::vector<int> constant(8, 0);
    CHECK(error_from_predictions(constant, labels) == doctest::Approx(1.0 - 1.0 / 4.0));
}

TEST_CASE("corruption error tables are complete grids") {
    const Dataset data = small_dataset(6, 8, 3, 6);
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 8;
    spec.num_classes = 3;
    spec.blocks = {{4, 3, 2}};
    nn::Model model(spec, 11);
    const auto kinds = std::vector<CorruptionKind>{CorruptionKind::GaussianNoise,
                                                   CorruptionKind::Brightness};
    const auto splits = generate_corruptions(data, kinds, RngState(8));
    const CorruptionErrorTable table =
        corruption_error(model, splits, data.labels, data.images);
    CHECK(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        for (double e : row.errors) {
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
        }
    }
}

TEST_CASE("mce identities and scaling") {
    RngState rng(31);
    CorruptionErrorTable base;
    for (CorruptionKind kind : all_corruption_kinds()) {
        CorruptionErrorTable::Row row;
        row.kind = kind;
        for (double& e : row.errors) e = sample_uniform(rng, 0.1, 0.8);
        base.rows.push_back(row);
    }
    CHECK(mce(base, base) == 100.0);

    CorruptionErrorTable doubled = base;
    for (auto& row : doubled.rows) {
        for (double& e : row.errors) e *= 2.0;
    }
    CHECK(mce(doubled, base) == doctest::Approx(200.0).epsilon(1e-12));

    CorruptionErrorTable halved = base;
    for (auto& row : halved.rows) {
        for (double& e : row.errors) e *= 0.5;
    }
    CHECK(mce(halved, base) == doctest::Approx(50.0).epsilon(1e-12));

    CorruptionErrorTable zero = base;
    for (auto& row : zero.rows) row.errors = {0, 0, 0, 0, 0};
    CHECK(thrown_code([&] { mce(base, zero); }) == Errc::BaselineDegenerate);
}

TEST_CASE("robust accuracy closed forms") {
    CorruptionErrorTable table;
    for (CorruptionKind kind : all_corruption_kinds()) {
        CorruptionErrorTable::Row row;
        row.kind = kind;
        row.errors = {0, 0, 0, 0, 0};
        table.rows.push_back(row);
    }
    CHECK(robust_accuracy(table) == 100.0);
    for (auto& row : table.rows) row.errors = {1, 1, 1, 1, 1};
    CHECK(robust_accuracy(table) == 0.0);
    for (auto& row : table.rows) row.errors = {0.25, 0.25, 0.25, 0.25, 0.25};
    CHECK(robust_accuracy(table) == doctest::Approx(75.0).epsilon(1e-12));
}

TEST_CASE("flip probability closed forms") {
    // constant predictions never flip
    CHECK(flip_prob_from_preds({{2, 2, 2, 2}}, true) == 0.0);
    CHECK(flip_prob_from_preds({{2, 2, 2, 2}}, false) == 0.0);
    // alternating predictions flip every frame when compared to the previous
    CHECK(flip_prob_from_preds({{0, 1, 0, 1}}, true) == 1.0);
    // single flip at frame 2 of 3, temporally related: 1/2 by enumeration
    CHECK(flip_prob_from_preds({{0, 1, 1}}, true) == doctest::Approx(0.5));
    CHECK(thrown_code([] { flip_prob_from_preds({{0}}, true); }) == Errc::SequenceTooShort);
}

TEST_CASE("mfr ratios") {
    std::map<std::string, double> f = {{"a", 0.2}, {"b", 0.4}};
    CHECK(mfr(f, f) == 1.0);
    std::map<std::string, double> twice = {{"a", 0.4}, {"b", 0.8}};
    CHECK(mfr(twice, f) == doctest::Approx(2.0).epsilon(1e-12));
    std::map<std::string, double> single_f = {{"x", 0.1}};
    std::map<std::string, double> single_b = {{"x", 0.4}};
    CHECK(mfr(single_f, single_b) == doctest::Approx(0.25).epsilon(1e-12));
    std::map<std::string, double> zero = {{"a", 0.0}, {"b", 0.4}};
    CHECK(thrown_code([&] { mfr(f, zero); }) == Errc::BaselineDegenerate);
}

TEST_CASE("top-5 distance: identical rankings give zero") {
    const std::vector<int> order = {3, 1, 4, 0, 2, 5};
    const std::vector<int> ranks = ranking_of(order);
    CHECK(t5d_pair_distance(ranks, ranks) == 0);
    CHECK(t5d_oracle(ranks, ranks) == 0);
}

TEST_CASE("top-5 distance of one adjacent transposition matches the oracle") {
    const std::vector<int> cur = ranking_of({1, 0, 2, 3, 4, 5});   // ranks 1 and 2 swapped
    const std::vector<int> prev = ranking_of({0, 1, 2, 3, 4, 5});
    const int oracle = t5d_oracle(cur, prev);
    CHECK(oracle == 2);  // frozen from the literal double sum
    CHECK(t5d_pair_distance(cur, prev) == oracle);
}

TEST_CASE("vectorized flip and t5d equal the literal double sums on random instances") {
    RngState rng(51);
    for (int instance = 0; instance < 50; ++instance) {
        const int m = 1 + static_cast<int>(sample_uniform(rng, 0.0, 4.0));
        const int n = 2 + static_cast<int>(sample_uniform(rng, 0.0, 5.0));
        const int k = 5 + static_cast<int>(sample_uniform(rng, 0.0, 4.0));
        const bool related = rng.next_double() < 0.5;

        std::vector<std::vector<int>> preds(static_cast<std::size_t>(m));
        for (auto& seq : preds) {
            seq.resize(static_cast<std::size_t>(n));
            for (int& p : seq) p = static_cast<int>(sample_uniform(rng, 0.0, k));
        }
        CHECK(flip_prob_from_preds(preds, related) == flip_prob_oracle(preds, related));

        std::vector<std::vector<std::vector<int>>> rankings(static_cast<std::size_t>(m));
        for (auto& seq : rankings) {
            for (int j = 0; j < n; ++j) {
                std::vector<int> order(static_cast<std::size_t>(k));
                std::iota(order.begin(), order.end(), 0);
                for (int i = k; i > 1; --i) {
                    const int jj = static_cast<int>(sample_uniform(rng, 0.0, i));
                    std::swap(order[static_cast<std::size_t>(i - 1)],
                              order[static_cast<std::size_t>(jj)]);
                }
                seq.push_back(ranking_of(order));
            }
        }
        double oracle_total = 0.0;
        for (const auto& seq : rankings) {
            for (int j = 1; j < n; ++j) {
                const auto& ref = related ? seq[static_cast<std::size_t>(j - 1)] : seq[0];
                oracle_total += t5d_oracle(seq[static_cast<std::size_t>(j)], ref);
            }
        }
        const double oracle = oracle_total / (static_cast<double>(m) * (n - 1));
        CHECK(t5d_from_rankings(rankings, related) == oracle);
    }
}

TEST_CASE("mt5d identity and class-count guard") {
    std::map<std::string, double> t = {{"a", 1.5}, {"b", 0.7}};
    CHECK(mt5d(t, t) == 1.0);
    CHECK(thrown_code([] {
              t5d_pair_distance({1, 2, 3, 4}, {1, 2, 3, 4});
          }) == Errc::NotEnoughClasses);
}

TEST_CASE("perturbation sequences have five frames and the right reference flag") {
    const Dataset data = small_dataset(3, 16, 3, 12);
    for (CorruptionKind kind : all_corruption_kinds()) {
        const PerturbationSequence seq = build_perturbation_sequence(data, kind, RngState(4));
        CHECK(seq.frames.size() == 3);
        for (const auto& frames : seq.frames) CHECK(frames.size() == 5);
        const bool noise = kind == CorruptionKind::GaussianNoise ||
                           kind == CorruptionKind::ShotNoise ||
                           kind == CorruptionKind::ImpulseNoise;
        CHECK(seq.temporally_related == !noise);
    }
}

TEST_CASE("zero-norm heatmap equals the clean error in every cell") {
    const Dataset data = small_dataset(8, 8, 3, 13);
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 8;
    spec.num_classes = 3;
    spec.blocks = {{4, 3, 2}};
    nn::Model model(spec, 21);

    HeatmapSpec hspec;
    hspec.extent = 4;
    hspec.v = 0.0;
    const HeatmapResult result = fourier_heatmap(model, data.images, data.labels, hspec,
                                                 RngState(3));
    for (double cell : result.errors.values) {
        CHECK(cell == result.clean_error);
    }
}

TEST_CASE("heatmap grids are deterministic and parallelism does not change them") {
    const Dataset data = small_dataset(6, 8, 3, 14);
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 8;
    spec.num_classes = 3;
    spec.blocks = {{4, 3, 2}};
    nn::Model model(spec, 22);

    HeatmapSpec hspec;
    hspec.extent = 4;
    hspec.v = 6.0;
    const HeatmapResult serial = fourier_heatmap(model, data.images, data.labels, hspec,
                                                 RngState(5));
    const HeatmapResult threaded = fourier_heatmap(model, data.images, data.labels, hspec,
                                                   RngState(5), 4);
    CHECK(serial.errors.values == threaded.errors.values);
}

TEST_CASE("heatmap rejects invalid parameters") {
    const Dataset data = small_dataset(2, 8, 2, 15);
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 8;
    spec.num_classes = 2;
    spec.blocks = {{4, 3, 2}};
    nn::Model model(spec, 23);

    HeatmapSpec bad_extent;
    bad_extent.extent = 5;  // M/2 = 4
    CHECK(thrown_code([&] {
              fourier_heatmap(model, data.images, data.labels, bad_extent, RngState(1));
          }) == Errc::InvalidBin);

    HeatmapSpec bad_v;
    bad_v.extent = 2;
    bad_v.v = -1.0;
    CHECK(thrown_code([&] {
              fourier_heatmap(model, data.images, data.labels, bad_v, RngState(1));
          }) == Errc::InvalidParam);
}
