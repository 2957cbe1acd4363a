#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afa/checkpoint.hpp"
#include "afa/dataset.hpp"
#include "afa/pnm.hpp"
#include "support/test_util.hpp"

using namespace afa;
using testsupport::thrown_code;

TEST_CASE("synthetic datasets are pure functions of their spec") {
    SyntheticSpec spec;
    spec.image_size = 16;
    spec.samples_per_class = 20;
    spec.seed = 42;
    auto [train_a, test_a] = synth_dataset(spec);
    auto [train_b, test_b] = synth_dataset(spec);
    REQUIRE(train_a.images.size() == train_b.images.size());
    for (std::size_t i = 0; i < train_a.images.size(); ++i) {
        CHECK(train_a.images[i].values() == train_b.images[i].values());
    }
    CHECK(train_a.labels == train_b.labels);
    CHECK(test_a.labels == test_b.labels);

    SyntheticSpec other = spec;
    other.seed = 43;
    auto [train_c, test_c] = synth_dataset(other);
    CHECK(train_c.images[0].values() != train_a.images[0].values());
}

TEST_CASE("splits are class balanced and follow the index rule") {
    SyntheticSpec spec;
    spec.image_size = 16;
    spec.num_classes = 4;
    spec.samples_per_class = 25;
    spec.seed = 7;
    auto [train, test] = synth_dataset(spec);
    CHECK(train.images.size() == 4 * 20);  // indices 0..24, every 5th held out
    CHECK(test.images.size() == 4 * 5);
    for (int klass = 0; klass < 4; ++klass) {
        CHECK(std::count(train.labels.begin(), train.labels.end(), klass) == 20);
        CHECK(std::count(test.labels.begin(), test.labels.end(), klass) == 5);
    }
    CHECK(train.split == "train");
    CHECK(test.split == "test");
}

TEST_CASE("generated images are clamped and survive clamp01 unchanged") {
    for (SynthFamily family :
         {SynthFamily::Checkerboard, SynthFamily::OrientedBars, SynthFamily::Rings}) {
        SyntheticSpec spec;
        spec.family = family;
        spec.image_size = 16;
        spec.samples_per_class = 5;
        spec.seed = 3;
        auto [train, test] = synth_dataset(spec);
        for (const ImageTensor& img : train.images) {
            CHECK(img.clamped());
            CHECK(clamp01(img).values() == img.values());
        }
    }
}

TEST_CASE("family names round trip and reject unknowns") {
    for (SynthFamily family :
         {SynthFamily::Checkerboard, SynthFamily::OrientedBars, SynthFamily::Rings}) {
        CHECK(parse_family(family_name(family)) == family);
    }
    CHECK(thrown_code([] { parse_family("mandelbrot"); }) == Errc::InvalidConfig);
}

TEST_CASE("pgm/ppm round trip preserves quantized images") {
    testsupport::TempDir dir("pnm");
    RngState rng(11);
    ImageTensor img = testsupport::random_image(rng, 3, 32);
    // quantize first so the byte format is lossless on it
    for (float& v : img.values()) {
        v = static_cast<float>(std::lround(v * 255.0f)) / 255.0f;
    }
    write_pgm_ppm(dir.path() / "img.ppm", img);
    const ImageTensor back = read_pgm_ppm(dir.path() / "img.ppm");
    CHECK(back.channels() == 3);
    CHECK(back.height() == 32);
    CHECK(back.width() == 32);
    CHECK(back.values() == img.values());
    CHECK(back.clamped());

    ImageTensor gray = testsupport::random_image(rng, 1, 17);
    for (float& v : gray.values()) {
        v = static_cast<float>(std::lround(v * 255.0f)) / 255.0f;
    }
    write_pgm_ppm(dir.path() / "img.pgm", gray);
    const ImageTensor gray_back = read_pgm_ppm(dir.path() / "img.pgm");
    CHECK(gray_back.channels() == 1);
    CHECK(gray_back.values() == gray.values());
}

TEST_CASE("round-trip quantization error is bounded by 1/510") {
    RngState rng(12);
    testsupport::TempDir dir("pnm-q");
    const ImageTensor img = testsupport::random_image(rng, 1, 16);
    write_pgm_ppm(dir.path() / "q.pgm", img);
    const ImageTensor back = read_pgm_ppm(dir.path() / "q.pgm");
    for (std::size_t i = 0; i < img.values().size(); ++i) {
        CHECK(std::abs(back.values()[i] - img.values()[i]) <= 1.0 / 510.0 + 1e-7);
    }
}

TEST_CASE("pnm header validation") {
    testsupport::TempDir dir("pnm-bad");
    {
        std::ofstream out(dir.path() / "bad.pgm", std::ios::binary);
        out << "P4\n2 2\n255\n....";
    }
    CHECK(thrown_code([&] { read_pgm_ppm(dir.path() / "bad.pgm"); }) == Errc::NotPnm);
    {
        std::ofstream out(dir.path() / "max.pgm", std::ios::binary);
        out << "P5\n2 2\n65535\n"
            << std::string(8, '\0');
    }
    CHECK(thrown_code([&] { read_pgm_ppm(dir.path() / "max.pgm"); }) == Errc::UnsupportedMaxval);
    {
        // comments inside the header are legal
        std::ofstream out(dir.path() / "comment.pgm", std::ios::binary);
        out << "P5\n# a comment\n2 2\n255\n"
            << std::string(4, '\x40');
    }
    const ImageTensor img = read_pgm_ppm(dir.path() / "comment.pgm");
    CHECK(img.width() == 2);
    CHECK(img.at(0, 0, 0) == doctest::Approx(64.0f / 255.0f));
}

TEST_CASE("checkpoints round trip parameters, statistics and architecture") {
    testsupport::TempDir dir("ckpt");
    nn::ModelSpec spec;
    spec.in_channels = 3;
    spec.image_size = 8;
    spec.num_classes = 5;
    spec.blocks = {{4, 3, 1}, {6, 3, 2}};
    nn::Model model(spec, 2024);

    // leave some training footprints so the stats differ from init
    RngState rng(13);
    std::vector<ImageTensor> batch;
    for (int i = 0; i < 3; ++i) batch.push_back(testsupport::random_image(rng, 3, 8));
    model.forward(batch, nn::Branch::Aux, true);
    model.forward(batch, nn::Branch::Main, true);

    nn::save_checkpoint(model, dir.path());
    nn::Model loaded = nn::load_checkpoint(dir.path());
    CHECK(loaded.spec().num_classes == 5);
    CHECK(loaded.spec().blocks.size() == 2);
    CHECK(loaded.norm_state_hash(nn::Branch::Main) == model.norm_state_hash(nn::Branch::Main));
    CHECK(loaded.norm_state_hash(nn::Branch::Aux) == model.norm_state_hash(nn::Branch::Aux));

    const nn::Matrix a = model.forward(batch, nn::Branch::Main, false);
    const nn::Matrix b = loaded.forward(batch, nn::Branch::Main, false);
    CHECK(a.values == b.values);

    // saving the loaded model reproduces the same bytes
    testsupport::TempDir dir2("ckpt2");
    nn::save_checkpoint(loaded, dir2.path());
    CHECK(nn::checkpoint_hash(dir.path()) == nn::checkpoint_hash(dir2.path()));
}

TEST_CASE("checkpoint loading validates the manifest") {
    testsupport::TempDir dir("ckpt-bad");
    {
        std::ofstream out(dir.path() / "model.manifest");
        out << "not a manifest\n";
    }
    CHECK(thrown_code([&] { nn::load_checkpoint(dir.path()); }) == Errc::CorruptFile);
    CHECK(thrown_code([&] { nn::load_checkpoint(dir.path() / "missing"); }) == Errc::IoError);
}
