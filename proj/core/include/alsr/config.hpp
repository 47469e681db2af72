#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "alsr/adaptive_weight.hpp"
#include "alsr/trainer.hpp"

namespace alsr {

/// One value of the run-config format: a quoted string, a number, true/false,
/// or a bracketed array of those.
struct ConfigValue {
    enum class Kind { String, Number, Bool, Array };

    Kind kind = Kind::String;
    std::string text;  ///< string contents, or the raw numeric token
    bool flag = false;
    std::vector<ConfigValue> items;

    double as_real(std::string_view key) const;
    std::int64_t as_integer(std::string_view key) const;
    std::uint64_t as_unsigned(std::string_view key) const;
    bool as_bool(std::string_view key) const;
    const std::string& as_string(std::string_view key) const;
    std::vector<double> as_reals(std::string_view key) const;
    std::vector<std::string> as_strings(std::string_view key) const;
};

/// Parsed config file: `[section]` headers, `key = value` lines, `#` comments.
/// Keys are addressed as "section.key".
class ConfigDocument {
public:
    static ConfigDocument parse(std::string_view text, std::string_view source = "<config>");
    static ConfigDocument load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.contains(key); }
    const ConfigValue& get(const std::string& key) const;
    void set(const std::string& key, ConfigValue value) { values_[key] = std::move(value); }
    const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }

private:
    std::map<std::string, ConfigValue> values_;
};

struct AblationSpec {
    std::vector<double> alphas = {0.01, 0.05, 0.1};
    std::vector<Kernel> kernels = {Kernel::Rational};
    std::vector<std::uint64_t> seeds = {0, 1, 2};
};

struct ExperimentConfig {
    RunConfig run;
    AblationSpec ablation;
};

/// Builds a validated configuration; keys absent from the document keep their
/// defaults, unknown keys raise ConfigError.
ExperimentConfig experiment_from_document(const ConfigDocument& doc);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Canonical text form; parsing it reproduces the configuration exactly.
std::string to_config_text(const ExperimentConfig& cfg);

/// Human-readable list of every recognized key with its default.
std::string config_key_reference();

}  // namespace alsr
