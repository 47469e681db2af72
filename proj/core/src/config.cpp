#include "alsr/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "alsr/errors.hpp"
#include "alsr/text_format.hpp"

namespace alsr {
namespace {

struct KeyInfo {
    const char* key;
    const char* help;
};

// Every recognized key. Defaults are printed from a default ExperimentConfig.
constexpr KeyInfo kKeys[] = {
    {"dataset.kind", "gaussian_iso | gaussian_mixture | two_moons | checkerboard"},
    {"dataset.dim", "data dimension (gaussian_iso, gaussian_mixture)"},
    {"dataset.sigma", "per-coordinate std of gaussian_iso"},
    {"dataset.centers", "gaussian_mixture centers, flattened (k * dim numbers)"},
    {"dataset.component_std", "gaussian_mixture component std"},
    {"dataset.noise_std", "two_moons jitter std"},
    {"dataset.cells", "checkerboard cells per side"},
    {"dataset.n_train", "training set size"},
    {"sampler.sampler", "lognormal | loguniform"},
    {"sampler.p_mean", "lognormal mean of ln(sigma)"},
    {"sampler.p_std", "lognormal std of ln(sigma)"},
    {"sampler.sigma_min", "loguniform lower sigma"},
    {"sampler.sigma_max", "loguniform upper sigma"},
    {"weight.alpha", "reweighting strength (0 = baseline EDM)"},
    {"weight.kernel", "rational | exponential"},
    {"weight.center_mode", "batch_mean | fixed"},
    {"weight.center_value", "center used when center_mode = fixed"},
    {"weight.normalize_batch_weights", "divide batch weights by their mean"},
    {"weight.center_ema", "smooth the batch center with an EMA"},
    {"weight.center_ema_momentum", "EMA momentum"},
    {"trainer.steps", "optimization steps"},
    {"trainer.batch_size", "samples per step"},
    {"trainer.learning_rate", "Adam learning rate"},
    {"trainer.beta1", "Adam beta1"},
    {"trainer.beta2", "Adam beta2"},
    {"trainer.epsilon", "Adam epsilon"},
    {"trainer.seed", "root seed (overridden by --seed)"},
    {"trainer.sigma_data", "data std used by preconditioning and log-SNR"},
    {"trainer.hidden", "hidden layer widths"},
    {"trainer.embedding_frequencies", "noise embedding frequency count"},
    {"trainer.embedding_min_frequency", "lowest embedding frequency"},
    {"trainer.embedding_max_frequency", "highest embedding frequency"},
    {"trainer.checkpoint_format", "binary | json"},
    {"telemetry.lambda_min", "lower edge of the log-SNR bin grid"},
    {"telemetry.lambda_max", "upper edge of the log-SNR bin grid"},
    {"telemetry.n_bins", "number of log-SNR bins"},
    {"telemetry.snapshot_fractions", "snapshot points as fractions of steps"},
    {"telemetry.record_weighted_loss", "record w_SNR-weighted instead of plain EDM loss"},
    {"eval.every", "evaluation cadence in steps (0 = final only)"},
    {"eval.n_generated", "generated samples per evaluation"},
    {"eval.n_reference", "held-out reference samples"},
    {"eval.ode_steps", "Heun sampler steps"},
    {"eval.sigma_min", "sampler schedule sigma_min"},
    {"eval.sigma_max", "sampler schedule sigma_max"},
    {"eval.rho", "sampler schedule warp exponent"},
    {"eval.n_projections", "sliced Wasserstein projections"},
    {"ablate.alphas", "alpha values swept by `ablate`"},
    {"ablate.kernels", "kernels swept by `ablate`"},
    {"ablate.seeds", "seeds swept by `ablate`"},
};

[[noreturn]] void fail(std::string_view source, int line, const std::string& message) {
    throw ConfigError(fmt::format("{}:{}: {}", source, line, message));
}

class LineParser {
public:
    LineParser(std::string_view text, std::string_view source, int line) : s_(text), source_(source), line_(line) {}

    ConfigValue value() {
        skip_space();
        if (pos_ >= s_.size()) {
            fail(source_, line_, "missing value");
        }
        const char c = s_[pos_];
        if (c == '"') {
            return string_value();
        }
        if (c == '[') {
            return array_value();
        }
        return bare_value();
    }

    void expect_end() {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] != '#') {
            fail(source_, line_, "unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
        }
    }

private:
    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    ConfigValue string_value() {
        ++pos_;
        ConfigValue v;
        v.kind = ConfigValue::Kind::String;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
                ++pos_;
            }
            v.text += s_[pos_++];
        }
        if (pos_ >= s_.size()) {
            fail(source_, line_, "unterminated string");
        }
        ++pos_;
        return v;
    }

    ConfigValue array_value() {
        ++pos_;
        ConfigValue v;
        v.kind = ConfigValue::Kind::Array;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(value());
            if (v.items.back().kind == ConfigValue::Kind::Array) {
                fail(source_, line_, "nested arrays are not supported");
            }
            skip_space();
            if (pos_ >= s_.size()) {
                fail(source_, line_, "unterminated array");
            }
            if (s_[pos_] == ',') {
                ++pos_;
                skip_space();
                if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail(source_, line_, "expected ',' or ']' in array");
        }
    }

    ConfigValue bare_value() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
               !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        const std::string token(s_.substr(start, pos_ - start));
        ConfigValue v;
        if (token == "true" || token == "false") {
            v.kind = ConfigValue::Kind::Bool;
            v.flag = token == "true";
            v.text = token;
            return v;
        }
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), parsed);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            fail(source_, line_, "cannot parse value '" + token + "' (strings need double quotes)");
        }
        v.kind = ConfigValue::Kind::Number;
        v.text = token;
        return v;
    }

    std::string_view s_;
    std::string_view source_;
    int line_;
    std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

std::string real_text(double v) {
    return fmt::format("{}", v);  // shortest text that round-trips
}

std::string reals_text(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + real_text(v[i]);
    }
    return out + "]";
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

double ConfigValue::as_real(std::string_view key) const {
    if (kind != Kind::Number) {
        throw ConfigError(fmt::format("{}: expected a number", key));
    }
    double v = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), v);
    return v;
}

std::int64_t ConfigValue::as_integer(std::string_view key) const {
    if (kind != Kind::Number) {
        throw ConfigError(fmt::format("{}: expected an integer", key));
    }
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, text));
    }
    return v;
}

std::uint64_t ConfigValue::as_unsigned(std::string_view key) const {
    if (kind != Kind::Number) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer", key));
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
    }
    return v;
}

bool ConfigValue::as_bool(std::string_view key) const {
    if (kind != Kind::Bool) {
        throw ConfigError(fmt::format("{}: expected true or false", key));
    }
    return flag;
}

const std::string& ConfigValue::as_string(std::string_view key) const {
    if (kind != Kind::String) {
        throw ConfigError(fmt::format("{}: expected a quoted string", key));
    }
    return text;
}

std::vector<double> ConfigValue::as_reals(std::string_view key) const {
    if (kind != Kind::Array) {
        throw ConfigError(fmt::format("{}: expected an array of numbers", key));
    }
    std::vector<double> out;
    for (const auto& item : items) {
        out.push_back(item.as_real(key));
    }
    return out;
}

std::vector<std::string> ConfigValue::as_strings(std::string_view key) const {
    if (kind != Kind::Array) {
        throw ConfigError(fmt::format("{}: expected an array of strings", key));
    }
    std::vector<std::string> out;
    for (const auto& item : items) {
        out.push_back(item.as_string(key));
    }
    return out;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string_view source) {
    ConfigDocument doc;
    std::string section;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const std::string line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line[0] == '#') {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (line[0] == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos) {
                fail(source, line_no, "unterminated section header");
            }
            section = trim(std::string_view(line).substr(1, close - 1));
            if (section.empty()) {
                fail(source, line_no, "empty section name");
            }
            LineParser rest(std::string_view(line).substr(close + 1), source, line_no);
            rest.expect_end();
        } else {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail(source, line_no, "expected 'key = value'");
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            if (key.empty()) {
                fail(source, line_no, "empty key");
            }
            const std::string full = section.empty() ? key : section + "." + key;
            if (doc.values_.contains(full)) {
                fail(source, line_no, "duplicate key '" + full + "'");
            }
            LineParser parser(std::string_view(line).substr(eq + 1), source, line_no);
            doc.values_[full] = parser.value();
            parser.expect_end();
        }
        if (end == text.size()) {
            break;
        }
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

const ConfigValue& ConfigDocument::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("missing config key '" + key + "'");
    }
    return it->second;
}

ExperimentConfig experiment_from_document(const ConfigDocument& doc) {
    std::set<std::string> known;
    for (const auto& k : kKeys) {
        known.insert(k.key);
    }
    for (const auto& [key, value] : doc.values()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown config key '" + key + "' (see `alsr --help`)");
        }
    }

    ExperimentConfig exp;
    RunConfig& cfg = exp.run;
    auto real = [&](const char* key, double& target) {
        if (doc.has(key)) {
            target = doc.get(key).as_real(key);
        }
    };
    auto uns = [&](const char* key, auto& target) {
        if (doc.has(key)) {
            target = static_cast<std::remove_reference_t<decltype(target)>>(doc.get(key).as_unsigned(key));
        }
    };
    auto flag = [&](const char* key, bool& target) {
        if (doc.has(key)) {
            target = doc.get(key).as_bool(key);
        }
    };
    auto str = [&](const char* key, const char* fallback) {
        return doc.has(key) ? doc.get(key).as_string(key) : std::string(fallback);
    };

    // dataset
    const std::string kind = str("dataset.kind", "gaussian_iso");
    int dim = 2;
    if (doc.has("dataset.dim")) {
        dim = static_cast<int>(doc.get("dataset.dim").as_integer("dataset.dim"));
    }
    if (kind == "gaussian_iso") {
        GaussianIso g{dim, 0.5};
        real("dataset.sigma", g.sigma_data);
        cfg.dataset.variant = g;
    } else if (kind == "gaussian_mixture") {
        GaussianMixture g;
        real("dataset.component_std", g.component_std);
        std::vector<double> flat = {-0.5, -0.5, 0.5, 0.5};
        if (doc.has("dataset.centers")) {
            flat = doc.get("dataset.centers").as_reals("dataset.centers");
        }
        if (dim < 1 || flat.empty() || flat.size() % static_cast<std::size_t>(dim) != 0) {
            throw ConfigError("dataset.centers must hold a multiple of dataset.dim numbers");
        }
        for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(dim)) {
            g.centers.emplace_back(Eigen::Map<const Eigen::VectorXd>(flat.data() + i, dim));
        }
        cfg.dataset.variant = g;
    } else if (kind == "two_moons") {
        TwoMoons m;
        real("dataset.noise_std", m.noise_std);
        cfg.dataset.variant = m;
    } else if (kind == "checkerboard") {
        Checkerboard c;
        if (doc.has("dataset.cells")) {
            c.cells = static_cast<int>(doc.get("dataset.cells").as_integer("dataset.cells"));
        }
        cfg.dataset.variant = c;
    } else {
        throw ConfigError("dataset.kind: unknown dataset '" + kind + "'");
    }
    uns("dataset.n_train", cfg.dataset.n_train);

    // sampler
    const std::string sampler = str("sampler.sampler", "lognormal");
    if (sampler == "lognormal") {
        LogNormal s;
        real("sampler.p_mean", s.p_mean);
        real("sampler.p_std", s.p_std);
        cfg.sampler = s;
    } else if (sampler == "loguniform") {
        LogUniform s;
        real("sampler.sigma_min", s.sigma_min);
        real("sampler.sigma_max", s.sigma_max);
        cfg.sampler = s;
    } else {
        throw ConfigError("sampler.sampler: unknown sampler '" + sampler + "' (expected lognormal or loguniform)");
    }

    // weight
    real("weight.alpha", cfg.weight.alpha);
    cfg.weight.kernel = kernel_from_string(str("weight.kernel", "rational"));
    const std::string center = str("weight.center_mode", "batch_mean");
    if (center == "batch_mean") {
        cfg.weight.center_mode = BatchMeanCenter{};
    } else if (center == "fixed") {
        FixedCenter fixed;
        real("weight.center_value", fixed.value);
        cfg.weight.center_mode = fixed;
    } else {
        throw ConfigError("weight.center_mode: expected batch_mean or fixed");
    }
    flag("weight.normalize_batch_weights", cfg.weight.normalize_batch_weights);
    flag("weight.center_ema", cfg.center_ema);
    real("weight.center_ema_momentum", cfg.center_ema_momentum);

    // trainer
    uns("trainer.steps", cfg.steps);
    uns("trainer.batch_size", cfg.batch_size);
    real("trainer.learning_rate", cfg.adam.learning_rate);
    real("trainer.beta1", cfg.adam.beta1);
    real("trainer.beta2", cfg.adam.beta2);
    real("trainer.epsilon", cfg.adam.epsilon);
    uns("trainer.seed", cfg.seed);
    real("trainer.sigma_data", cfg.sigma_data);
    if (doc.has("trainer.hidden")) {
        cfg.model.hidden.clear();
        for (double w : doc.get("trainer.hidden").as_reals("trainer.hidden")) {
            if (w < 1 || w != std::floor(w)) {
                throw ConfigError("trainer.hidden: widths must be positive integers");
            }
            cfg.model.hidden.push_back(static_cast<int>(w));
        }
    }
    {
        std::uint64_t n_freq = 16;
        double f_min = 0.25;
        double f_max = 32.0;
        uns("trainer.embedding_frequencies", n_freq);
        real("trainer.embedding_min_frequency", f_min);
        real("trainer.embedding_max_frequency", f_max);
        cfg.model.embedding = NoiseEmbedding::geometric(static_cast<int>(n_freq), f_min, f_max);
    }
    cfg.model.data_dim = dataset_dim(cfg.dataset.variant);
    cfg.checkpoint_format = checkpoint_format_from_string(str("trainer.checkpoint_format", "binary"));

    // telemetry
    real("telemetry.lambda_min", cfg.telemetry.grid.lambda_min);
    real("telemetry.lambda_max", cfg.telemetry.grid.lambda_max);
    if (doc.has("telemetry.n_bins")) {
        cfg.telemetry.grid.n_bins = static_cast<int>(doc.get("telemetry.n_bins").as_integer("telemetry.n_bins"));
    }
    if (doc.has("telemetry.snapshot_fractions")) {
        cfg.telemetry.snapshot_fractions =
            doc.get("telemetry.snapshot_fractions").as_reals("telemetry.snapshot_fractions");
    }
    flag("telemetry.record_weighted_loss", cfg.telemetry.record_weighted_loss);

    // eval
    uns("eval.every", cfg.eval.every);
    uns("eval.n_generated", cfg.eval.n_generated);
    uns("eval.n_reference", cfg.eval.n_reference);
    if (doc.has("eval.ode_steps")) {
        cfg.eval.schedule.n_steps = static_cast<int>(doc.get("eval.ode_steps").as_integer("eval.ode_steps"));
    }
    real("eval.sigma_min", cfg.eval.schedule.sigma_min);
    real("eval.sigma_max", cfg.eval.schedule.sigma_max);
    real("eval.rho", cfg.eval.schedule.rho);
    if (doc.has("eval.n_projections")) {
        cfg.eval.n_projections = static_cast<int>(doc.get("eval.n_projections").as_integer("eval.n_projections"));
    }

    // ablate
    if (doc.has("ablate.alphas")) {
        exp.ablation.alphas = doc.get("ablate.alphas").as_reals("ablate.alphas");
    }
    if (doc.has("ablate.kernels")) {
        exp.ablation.kernels.clear();
        for (const auto& k : doc.get("ablate.kernels").as_strings("ablate.kernels")) {
            exp.ablation.kernels.push_back(kernel_from_string(k));
        }
    }
    if (doc.has("ablate.seeds")) {
        exp.ablation.seeds.clear();
        for (const auto& item : doc.get("ablate.seeds").items) {
            exp.ablation.seeds.push_back(item.as_unsigned("ablate.seeds"));
        }
    }

    try {
        cfg.validate();
    } catch (const std::logic_error& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return exp;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    return experiment_from_document(ConfigDocument::load(path));
}

std::string to_config_text(const ExperimentConfig& exp) {
    const RunConfig& cfg = exp.run;
    std::ostringstream out;
    out << "[dataset]\n";
    std::visit(Overloaded{
                   [&](const GaussianIso& g) {
                       out << "kind = \"gaussian_iso\"\n"
                           << "dim = " << g.dim << "\n"
                           << "sigma = " << real_text(g.sigma_data) << "\n";
                   },
                   [&](const GaussianMixture& g) {
                       std::vector<double> flat;
                       for (const auto& c : g.centers) {
                           flat.insert(flat.end(), c.data(), c.data() + c.size());
                       }
                       out << "kind = \"gaussian_mixture\"\n"
                           << "dim = " << g.centers.front().size() << "\n"
                           << "centers = " << reals_text(flat) << "\n"
                           << "component_std = " << real_text(g.component_std) << "\n";
                   },
                   [&](const TwoMoons& m) {
                       out << "kind = \"two_moons\"\n"
                           << "noise_std = " << real_text(m.noise_std) << "\n";
                   },
                   [&](const Checkerboard& c) {
                       out << "kind = \"checkerboard\"\n"
                           << "cells = " << c.cells << "\n";
                   },
               },
               cfg.dataset.variant);
    out << "n_train = " << cfg.dataset.n_train << "\n\n";

    out << "[sampler]\n";
    std::visit(Overloaded{
                   [&](const LogNormal& s) {
                       out << "sampler = \"lognormal\"\n"
                           << "p_mean = " << real_text(s.p_mean) << "\n"
                           << "p_std = " << real_text(s.p_std) << "\n";
                   },
                   [&](const LogUniform& s) {
                       out << "sampler = \"loguniform\"\n"
                           << "sigma_min = " << real_text(s.sigma_min) << "\n"
                           << "sigma_max = " << real_text(s.sigma_max) << "\n";
                   },
               },
               cfg.sampler);

    out << "\n[weight]\n"
        << "alpha = " << real_text(cfg.weight.alpha) << "\n"
        << "kernel = \"" << to_string(cfg.weight.kernel) << "\"\n";
    if (const auto* fixed = std::get_if<FixedCenter>(&cfg.weight.center_mode)) {
        out << "center_mode = \"fixed\"\ncenter_value = " << real_text(fixed->value) << "\n";
    } else {
        out << "center_mode = \"batch_mean\"\n";
    }
    out << "normalize_batch_weights = " << (cfg.weight.normalize_batch_weights ? "true" : "false") << "\n"
        << "center_ema = " << (cfg.center_ema ? "true" : "false") << "\n"
        << "center_ema_momentum = " << real_text(cfg.center_ema_momentum) << "\n";

    std::vector<double> hidden(cfg.model.hidden.begin(), cfg.model.hidden.end());
    const auto& freqs = cfg.model.embedding.frequencies;
    out << "\n[trainer]\n"
        << "steps = " << cfg.steps << "\n"
        << "batch_size = " << cfg.batch_size << "\n"
        << "learning_rate = " << real_text(cfg.adam.learning_rate) << "\n"
        << "beta1 = " << real_text(cfg.adam.beta1) << "\n"
        << "beta2 = " << real_text(cfg.adam.beta2) << "\n"
        << "epsilon = " << real_text(cfg.adam.epsilon) << "\n"
        << "seed = " << cfg.seed << "\n"
        << "sigma_data = " << real_text(cfg.sigma_data) << "\n"
        << "hidden = " << reals_text(hidden) << "\n"
        << "embedding_frequencies = " << freqs.size() << "\n"
        << "embedding_min_frequency = " << real_text(freqs.front()) << "\n"
        << "embedding_max_frequency = " << real_text(freqs.back()) << "\n"
        << "checkpoint_format = \"" << to_string(cfg.checkpoint_format) << "\"\n";

    out << "\n[telemetry]\n"
        << "lambda_min = " << real_text(cfg.telemetry.grid.lambda_min) << "\n"
        << "lambda_max = " << real_text(cfg.telemetry.grid.lambda_max) << "\n"
        << "n_bins = " << cfg.telemetry.grid.n_bins << "\n"
        << "snapshot_fractions = " << reals_text(cfg.telemetry.snapshot_fractions) << "\n"
        << "record_weighted_loss = " << (cfg.telemetry.record_weighted_loss ? "true" : "false") << "\n";

    out << "\n[eval]\n"
        << "every = " << cfg.eval.every << "\n"
        << "n_generated = " << cfg.eval.n_generated << "\n"
        << "n_reference = " << cfg.eval.n_reference << "\n"
        << "ode_steps = " << cfg.eval.schedule.n_steps << "\n"
        << "sigma_min = " << real_text(cfg.eval.schedule.sigma_min) << "\n"
        << "sigma_max = " << real_text(cfg.eval.schedule.sigma_max) << "\n"
        << "rho = " << real_text(cfg.eval.schedule.rho) << "\n"
        << "n_projections = " << cfg.eval.n_projections << "\n";

    out << "\n[ablate]\n"
        << "alphas = " << reals_text(exp.ablation.alphas) << "\n"
        << "kernels = [";
    for (std::size_t i = 0; i < exp.ablation.kernels.size(); ++i) {
        out << (i ? ", " : "") << '"' << to_string(exp.ablation.kernels[i]) << '"';
    }
    out << "]\nseeds = [";
    for (std::size_t i = 0; i < exp.ablation.seeds.size(); ++i) {
        out << (i ? ", " : "") << exp.ablation.seeds[i];
    }
    out << "]\n";
    return out.str();
}

std::string config_key_reference() {
    const std::string defaults = to_config_text(ExperimentConfig{});
    std::string out = "Config keys (section.key: meaning):\n";
    for (const auto& k : kKeys) {
        out += fmt::format("  {:<34} {}\n", k.key, k.help);
    }
    out += "\nDefaults:\n" + defaults;
    return out;
}

}  // namespace alsr
