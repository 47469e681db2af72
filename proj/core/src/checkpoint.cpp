#include "alsr/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "alsr/errors.hpp"
#include "alsr/text_format.hpp"

namespace alsr {
namespace {

constexpr char kMagic[8] = {'A', 'L', 'S', 'R', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T value) {
    static_assert(std::endian::native == std::endian::little, "checkpoint writer assumes a little-endian host");
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.append(bytes, sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        if (pos_ + sizeof(T) > bytes_.size()) {
            throw IoError("checkpoint truncated");
        }
        T value;
        std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::string get_string(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw IoError("checkpoint truncated");
        }
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::uint64_t element_count(const NamedTensor& t) {
    std::uint64_t n = 1;
    for (auto d : t.shape) {
        n *= d;
    }
    return n;
}

}  // namespace

std::string_view to_string(CheckpointFormat format) {
    return format == CheckpointFormat::Binary ? "binary" : "json";
}

CheckpointFormat checkpoint_format_from_string(std::string_view name) {
    if (name == "binary") {
        return CheckpointFormat::Binary;
    }
    if (name == "json") {
        return CheckpointFormat::Json;
    }
    throw ConfigError("unknown checkpoint format '" + std::string(name) + "' (expected binary or json)");
}

std::vector<NamedTensor> to_named_tensors(const MlpDenoiser& model) {
    std::vector<NamedTensor> tensors;
    const auto& freqs = model.architecture().embedding.frequencies;
    tensors.push_back({"embedding.frequencies", {freqs.size()}, freqs});
    for (int l = 0; l < model.layer_count(); ++l) {
        const auto w = model.weight(l);
        NamedTensor tw{fmt::format("layer{}.weight", l),
                       {static_cast<std::uint64_t>(w.rows()), static_cast<std::uint64_t>(w.cols())},
                       {}};
        tw.data.reserve(static_cast<std::size_t>(w.size()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                tw.data.push_back(w(r, c));
            }
        }
        tensors.push_back(std::move(tw));
        const auto b = model.bias(l);
        tensors.push_back({fmt::format("layer{}.bias", l),
                           {static_cast<std::uint64_t>(b.size())},
                           std::vector<double>(b.data(), b.data() + b.size())});
    }
    return tensors;
}

MlpDenoiser from_named_tensors(const std::vector<NamedTensor>& tensors) {
    if (tensors.empty() || tensors.front().name != "embedding.frequencies" || (tensors.size() - 1) % 2 != 0 ||
        tensors.size() < 3) {
        throw IoError("checkpoint does not hold an embedding followed by weight/bias pairs");
    }
    for (const auto& t : tensors) {
        if (element_count(t) != t.data.size()) {
            throw IoError("checkpoint tensor '" + t.name + "' has inconsistent shape");
        }
    }
    MlpArchitecture arch;
    arch.embedding.frequencies = tensors.front().data;
    arch.hidden.clear();
    const std::size_t n_layers = (tensors.size() - 1) / 2;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const auto& w = tensors[1 + 2 * l];
        if (w.name != fmt::format("layer{}.weight", l) || w.shape.size() != 2) {
            throw IoError("checkpoint: expected tensor layer" + std::to_string(l) + ".weight");
        }
        if (l + 1 < n_layers) {
            arch.hidden.push_back(static_cast<int>(w.shape[0]));
        } else {
            arch.data_dim = static_cast<int>(w.shape[0]);
        }
    }
    MlpDenoiser model(arch);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int li = static_cast<int>(l);
        const auto& tw = tensors[1 + 2 * l];
        const auto& tb = tensors[2 + 2 * l];
        auto w = model.mutable_weight(li);
        if (tw.shape[0] != static_cast<std::uint64_t>(w.rows()) || tw.shape[1] != static_cast<std::uint64_t>(w.cols()) ||
            tb.name != fmt::format("layer{}.bias", l) || tb.data.size() != static_cast<std::size_t>(w.rows())) {
            throw IoError("checkpoint: layer " + std::to_string(l) + " shapes do not chain");
        }
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = tw.data[k++];
            }
        }
        auto b = model.mutable_bias(li);
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            b(r) = tb.data[static_cast<std::size_t>(r)];
        }
    }
    return model;
}

void save_checkpoint(const MlpDenoiser& model, const std::filesystem::path& path, CheckpointFormat format) {
    const auto tensors = to_named_tensors(model);
    if (format == CheckpointFormat::Json) {
        nlohmann::ordered_json doc;
        doc["format"] = "alsr-checkpoint";
        doc["version"] = kVersion;
        doc["tensors"] = nlohmann::ordered_json::array();
        for (const auto& t : tensors) {
            doc["tensors"].push_back({{"name", t.name}, {"shape", t.shape}, {"data", t.data}});
        }
        write_file(path, doc.dump() + "\n");
        return;
    }
    std::string out(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
        out += t.name;
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape) {
            put<std::uint64_t>(out, d);
        }
        for (double v : t.data) {
            put<double>(out, v);
        }
    }
    write_file(path, out);
}

MlpDenoiser load_checkpoint(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    std::vector<NamedTensor> tensors;
    if (bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0) {
        Reader in(std::string_view(bytes).substr(sizeof(kMagic)));
        if (in.get<std::uint32_t>() != kVersion) {
            throw IoError(path.string() + ": unsupported checkpoint version");
        }
        const auto count = in.get<std::uint32_t>();
        for (std::uint32_t i = 0; i < count; ++i) {
            NamedTensor t;
            t.name = in.get_string(in.get<std::uint32_t>());
            const auto rank = in.get<std::uint32_t>();
            for (std::uint32_t r = 0; r < rank; ++r) {
                t.shape.push_back(in.get<std::uint64_t>());
            }
            const auto n = element_count(t);
            t.data.reserve(n);
            for (std::uint64_t k = 0; k < n; ++k) {
                t.data.push_back(in.get<double>());
            }
            tensors.push_back(std::move(t));
        }
        if (!in.done()) {
            throw IoError(path.string() + ": trailing bytes after checkpoint");
        }
    } else {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(bytes);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path.string() + ": not a checkpoint (" + e.what() + ")");
        }
        if (doc.value("format", "") != "alsr-checkpoint" || doc.value("version", 0U) != kVersion) {
            throw IoError(path.string() + ": not an alsr-checkpoint v1 document");
        }
        for (const auto& t : doc.at("tensors")) {
            tensors.push_back({t.at("name").get<std::string>(), t.at("shape").get<std::vector<std::uint64_t>>(),
                               t.at("data").get<std::vector<double>>()});
        }
    }
    return from_named_tensors(tensors);
}

}  // namespace alsr
