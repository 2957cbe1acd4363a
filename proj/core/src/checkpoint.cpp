#include "afa/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "afa/tensor_io.hpp"

namespace afa::nn {

namespace {

const char* role_name(ParamRole role) {
    switch (role) {
        case ParamRole::Weight: return "weight";
        case ParamRole::MainAffine: return "main-affine";
        case ParamRole::AuxAffine: return "aux-affine";
    }
    return "weight";
}

std::string dims_string(const std::vector<std::uint32_t>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims[i]);
    }
    return out;
}

std::string file_for(const std::string& name) { return name + ".afat"; }

void write_entry(std::ostream& manifest, const std::filesystem::path& dir,
                 const std::string& name, const std::vector<std::uint32_t>& dims,
                 const std::vector<float>& values, const char* role) {
    const std::string file = file_for(name);
    write_tensor(dir / file, Tensor(dims, values));
    manifest << "param " << name << ' ' << file << ' ' << dims_string(dims) << ' ' << role
             << '\n';
}

}  // namespace

void save_checkpoint(Model& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "model.manifest", std::ios::trunc);
    if (!manifest) {
        raise(Errc::IoError, "cannot write manifest in " + dir.string());
    }
    const ModelSpec& spec = model.spec();
    manifest << "afa-model v1\n";
    manifest << "input " << spec.in_channels << ' ' << spec.image_size << ' ' << spec.image_size
             << '\n';
    manifest << "classes " << spec.num_classes << '\n';
    for (const ConvSpec& b : spec.blocks) {
        manifest << "block " << b.out_channels << ' ' << b.kernel << ' ' << b.stride << '\n';
    }
    for (const ParamView& p : model.parameters()) {
        write_entry(manifest, dir, p.name, p.dims, *p.values, role_name(p.role));
    }
    for (const StatView& s : model.statistics()) {
        write_entry(manifest, dir, s.name, s.dims, *s.values, "stat");
    }
    if (!manifest) {
        raise(Errc::IoError, "short manifest write in " + dir.string());
    }
}

Model load_checkpoint(const std::filesystem::path& dir) {
    std::ifstream manifest(dir / "model.manifest");
    if (!manifest) {
        raise(Errc::IoError, "missing manifest in " + dir.string());
    }
    std::string line;
    if (!std::getline(manifest, line) || line != "afa-model v1") {
        raise(Errc::CorruptFile, "unrecognized manifest header in " + dir.string());
    }

    ModelSpec spec;
    spec.blocks.clear();
    struct Entry {
        std::string name;
        std::string file;
    };
    std::vector<Entry> entries;
    bool have_input = false;
    bool have_classes = false;
    while (std::getline(manifest, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        if (tag == "input") {
            int h = 0, w = 0;
            in >> spec.in_channels >> h >> w;
            if (!in || h != w) {
                raise(Errc::CorruptFile, "bad input line in manifest");
            }
            spec.image_size = h;
            have_input = true;
        } else if (tag == "classes") {
            in >> spec.num_classes;
            have_classes = true;
        } else if (tag == "block") {
            ConvSpec b;
            in >> b.out_channels >> b.kernel >> b.stride;
            if (!in) {
                raise(Errc::CorruptFile, "bad block line in manifest");
            }
            spec.blocks.push_back(b);
        } else if (tag == "param") {
            Entry e;
            std::string dims, role;
            in >> e.name >> e.file >> dims >> role;
            if (!in) {
                raise(Errc::CorruptFile, "bad param line in manifest");
            }
            entries.push_back(std::move(e));
        } else {
            raise(Errc::CorruptFile, "unknown manifest tag: " + tag);
        }
    }
    if (!have_input || !have_classes || spec.blocks.empty()) {
        raise(Errc::CorruptFile, "manifest is missing the architecture");
    }

    Model model(spec, 0);
    auto load_into = [&](const std::string& name, std::vector<float>& target) {
        for (const Entry& e : entries) {
            if (e.name != name) continue;
            Tensor t = read_tensor(dir / e.file);
            if (t.values().size() != target.size()) {
                raise(Errc::CorruptFile, "tensor extent mismatch for " + name);
            }
            target = t.values();
            return;
        }
        raise(Errc::CorruptFile, "manifest is missing tensor " + name);
    };
    for (ParamView& p : model.parameters()) load_into(p.name, *p.values);
    for (StatView& s : model.statistics()) load_into(s.name, *s.values);
    return model;
}

std::uint64_t checkpoint_hash(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    files.push_back(dir / "model.manifest");
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".afat") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            raise(Errc::IoError, "cannot hash " + file.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = buf.str();
        hash = detail::mix64(hash ^ fnv1a(bytes.data(), bytes.size()));
    }
    return hash;
}

}  // namespace afa::nn
