#include "afa/pnm.hpp"

#include <cmath>
#include <fstream>

namespace afa {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (ch != EOF && !std::isspace(ch)) {
        token.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    return token;
}

int parse_positive(const std::string& token) {
    if (token.empty()) return -1;
    int value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return -1;
        value = value * 10 + (c - '0');
        if (value > 1 << 20) return -1;
    }
    return value;
}

}  // namespace

ImageTensor read_pgm_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path.string());
    }
    const std::string magic = next_token(in);
    int channels = 0;
    if (magic == "P5") {
        channels = 1;
    } else if (magic == "P6") {
        channels = 3;
    } else {
        raise(Errc::NotPnm, "expected binary P5 or P6: " + path.string());
    }
    const int width = parse_positive(next_token(in));
    const int height = parse_positive(next_token(in));
    const int maxval = parse_positive(next_token(in));
    if (width <= 0 || height <= 0 || maxval <= 0) {
        raise(Errc::NotPnm, "malformed header: " + path.string());
    }
    if (maxval != 255) {
        raise(Errc::UnsupportedMaxval, "only maxval 255 is supported: " + path.string());
    }

    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<unsigned char> raw(count);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count))) {
        raise(Errc::NotPnm, "truncated pixel data: " + path.string());
    }

    // PNM interleaves channels per pixel; ImageTensor is planar.
    ImageTensor img(channels, height, width, true);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                const unsigned char byte =
                    raw[(static_cast<std::size_t>(y) * width + x) * channels + c];
                img.at(c, y, x) = static_cast<float>(byte) / 255.0f;
            }
        }
    }
    return img;
}

void write_pgm_ppm(const std::filesystem::path& path, const ImageTensor& img) {
    if (img.channels() != 1 && img.channels() != 3) {
        raise(Errc::InvalidDims, "PNM output needs 1 or 3 channels");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(Errc::IoError, "cannot open " + path.string());
    }
    out << (img.channels() == 1 ? "P5" : "P6") << '\n'
        << img.width() << ' ' << img.height() << '\n'
        << 255 << '\n';
    std::vector<unsigned char> raw(static_cast<std::size_t>(img.width()) * img.height() *
                                   img.channels());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < img.channels(); ++c) {
                const double v = std::min(1.0, std::max(0.0, static_cast<double>(img.at(c, y, x))));
                raw[(static_cast<std::size_t>(y) * img.width() + x) * img.channels() + c] =
                    static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) {
        raise(Errc::IoError, "short write: " + path.string());
    }
}

std::pair<double, double> write_pgm_autoscale(const std::filesystem::path& path,
                                              const RealGrid& grid) {
    double lo = grid.values.empty() ? 0.0 : grid.values[0];
    double hi = lo;
    for (double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    ImageTensor img(1, grid.height, grid.width, true);
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            img.at(0, y, x) = span > 0.0
                                  ? static_cast<float>((grid.at(y, x) - lo) / span)
                                  : 0.0f;
        }
    }
    write_pgm_ppm(path, img);
    return {lo, hi};
}

}  // namespace afa
