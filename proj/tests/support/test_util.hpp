#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "afa/errors.hpp"
#include "afa/rng.hpp"
#include "afa/tensor.hpp"

namespace testsupport {

inline std::optional<afa::Errc> thrown_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const afa::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline afa::ImageTensor random_image(afa::RngState& rng, int channels, int size) {
    afa::ImageTensor img(channels, size, size, false);
    for (float& v : img.values()) {
        v = static_cast<float>(afa::sample_uniform(rng, 0.0, 1.0));
    }
    img.set_clamped(true);
    return img;
}

inline std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    return afa::fnv1a(bytes.data(), bytes.size());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Fresh scratch directory under the system temp root, removed on scope exit.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace testsupport
