#include "cli.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "alsr/ablation.hpp"
#include "alsr/checkpoint.hpp"
#include "alsr/config.hpp"
#include "alsr/errors.hpp"
#include "alsr/run_io.hpp"
#include "alsr/text_format.hpp"
#include "alsr/trainer.hpp"
#include "alsr/variance_lab.hpp"

namespace alsr::cli {
namespace fs = std::filesystem;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
}

ExperimentConfig load_with_seed(const fs::path& path, const std::optional<std::uint64_t>& seed) {
    ExperimentConfig exp = load_experiment(path);
    if (seed) {
        exp.run.seed = *seed;
    }
    return exp;
}

int run_train(const TrainCommand& cmd, std::ostream& log) {
    const ExperimentConfig exp = load_with_seed(cmd.config, cmd.seed);
    const std::uint64_t total = exp.run.steps;
    const std::uint64_t every = std::max<std::uint64_t>(1, total / 10);
    const RunReport report = run_training(exp.run, [&](const StepRecord& r) {
        if (r.step % every == 0 || r.step == total) {
            log << fmt::format("step {}/{}  loss {:.6g}  edm {:.6g}  w {:.4f}\n", r.step, total, r.loss_weighted,
                               r.loss_unweighted, r.mean_weight);
        }
    });
    write_run_outputs(report, cmd.out, exp.ablation);
    log << fmt::format("final energy distance {:.6g}, sliced W1 {:.6g}; outputs in {}\n",
                       report.final_metrics.energy_distance, report.final_metrics.sliced_wasserstein,
                       cmd.out.string());
    return kExitOk;
}

int run_eval(const EvalCommand& cmd, std::ostream& log) {
    const ExperimentConfig exp = load_with_seed(cmd.config, cmd.seed);
    const MlpDenoiser model = load_checkpoint(cmd.checkpoint);
    if (model.architecture().data_dim != dataset_dim(exp.run.dataset.variant)) {
        throw ContractViolation("checkpoint dimension does not match the configured dataset");
    }
    const auto reference = reference_samples(exp.run);
    const auto metrics =
        evaluate_model(model, exp.run, reference, derive_seed(exp.run.seed, "eval", exp.run.steps));
    ensure_dir(cmd.out);
    nlohmann::ordered_json doc;
    doc["metric_note"] = kMetricNote;
    doc["checkpoint"] = cmd.checkpoint.generic_string();
    doc["seed"] = exp.run.seed;
    doc["metrics"] = metrics_json(metrics);
    write_file(cmd.out / "metrics.json", doc.dump(2) + "\n");
    write_manifest(cmd.out);
    log << fmt::format("energy distance {:.6g}, sliced W1 {:.6g}\n", metrics.energy_distance,
                       metrics.sliced_wasserstein);
    return kExitOk;
}

int run_variance_lab(const VarianceLabCommand& cmd, std::ostream& log) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(cmd.population));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(cmd.population.string() + ": " + e.what());
    }
    const DiscretePopulation pop = population_from_json(doc);
    int resolution = cmd.resolution.value_or(default_lattice_resolution(pop.size()));
    if (doc.contains("resolution") && !cmd.resolution) {
        resolution = doc.at("resolution").get<int>();
    }
    std::uint64_t n = cmd.n;
    if (doc.contains("n") && cmd.n == 1) {
        n = doc.at("n").get<std::uint64_t>();
    }
    const auto report = variance_lab_report(pop, resolution, n);
    ensure_dir(cmd.out);
    write_file(cmd.out / "variance_lab.json", report.dump(2) + "\n");
    write_manifest(cmd.out);
    log << "wrote " << (cmd.out / "variance_lab.json").string() << "\n";
    const auto& lattice = report.at("lattice");
    if (!lattice.is_null() && !lattice.at("optimum_attains_lattice_minimum").get<bool>()) {
        log << "optimal proposal does NOT attain the lattice minimum\n";
        return kExitFailure;
    }
    return kExitOk;
}

int run_ablate(const AblateCommand& cmd, std::ostream& log) {
    const ExperimentConfig exp = load_experiment(cmd.config);
    AblationOptions options;
    options.out_dir = cmd.out;
    options.threads = cmd.threads;
    ensure_dir(cmd.out);
    const auto table =
        run_ablation(exp.run, exp.ablation.alphas, exp.ablation.kernels, exp.ablation.seeds, options);
    write_file(cmd.out / "ablation.csv", ablation_csv(table));
    write_file(cmd.out / "resolved_config.toml", to_config_text(exp));
    write_manifest(cmd.out);
    for (const auto& cell : table.cells) {
        for (const auto& run : cell.runs) {
            if (!run.ok) {
                log << fmt::format("run alpha={} kernel={} seed={} failed: {}\n", format_real(cell.alpha),
                                   to_string(cell.kernel), run.seed, run.error);
            }
        }
    }
    log << "wrote " << (cmd.out / "ablation.csv").string() << "\n";
    return table.all_ok() ? kExitOk : kExitPartial;
}

struct RunRow {
    std::string label;
    double alpha = 0.0;
    std::string kernel;
    std::uint64_t seed = 0;
    double energy = 0.0;
    double sliced = 0.0;
    std::optional<double> concentration;
};

std::string method_name(double alpha, const std::string& kernel) {
    if (alpha == 0.0) {
        return "baseline";
    }
    return fmt::format("adaptive (alpha={}, {})", format_real(alpha), kernel);
}

std::string opt_real(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string{};
}

int run_report(const ReportCommand& cmd, std::ostream& log) {
    const auto outcome = assemble_report(cmd.run_dirs, cmd.out);
    for (const auto& e : outcome.errors) {
        log << "report: " << e << "\n";
    }
    log << fmt::format("report: {} run(s) merged into {}\n", outcome.runs_ok, cmd.out.string());
    return outcome.errors.empty() ? kExitOk : kExitPartial;
}

}  // namespace

Command parse_args(const std::vector<std::string>& argv) {
    CLI::App app{"Adaptive log-SNR reweighting lab: train, evaluate, verify and compare diffusion runs."};
    app.name(argv.empty() ? "alsr" : fs::path(argv.front()).filename().string());
    app.require_subcommand(1);
    app.footer("\n" + config_key_reference() +
               "\nPrecedence: command-line flags (e.g. --seed) override config-file keys; environment variables are "
               "never read.");

    TrainCommand train;
    std::uint64_t train_seed = 0;
    auto* train_cmd = app.add_subcommand("train", "Train one run; writes curves, heatmap, metrics and a checkpoint");
    train_cmd->add_option("--config", train.config, "Run config file")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train.out, "Output directory")->required();
    auto* train_seed_opt = train_cmd->add_option("--seed", train_seed, "Override trainer.seed");

    EvalCommand eval;
    std::uint64_t eval_seed = 0;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint; writes metrics.json");
    eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--config", eval.config, "Run config file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval.out, "Output directory")->required();
    auto* eval_seed_opt = eval_cmd->add_option("--seed", eval_seed, "Override trainer.seed");

    VarianceLabCommand lab;
    int lab_resolution = 0;
    auto* lab_cmd = app.add_subcommand("variance-lab", "Exact variance analysis of a discrete log-SNR population");
    lab_cmd->add_option("--population", lab.population, "Population JSON (lambdas, base_prob, cond_mean, cond_var)")
        ->required()
        ->check(CLI::ExistingFile);
    lab_cmd->add_option("--out", lab.out, "Output directory")->required();
    auto* lab_res_opt =
        lab_cmd->add_option("--resolution", lab_resolution, "Simplex lattice resolution")->check(CLI::PositiveNumber);
    lab_cmd->add_option("--n", lab.n, "Estimator sample count")->check(CLI::PositiveNumber);

    AblateCommand ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Sweep [ablate] alphas x kernels x seeds; writes ablation.csv");
    ablate_cmd->add_option("--config", ablate.config, "Run config file")->required()->check(CLI::ExistingFile);
    ablate_cmd->add_option("--out", ablate.out, "Output directory")->required();
    ablate_cmd->add_option("--threads", ablate.threads, "Concurrent runs")->check(CLI::PositiveNumber);

    ReportCommand report;
    auto* report_cmd = app.add_subcommand("report", "Merge run directories into comparison tables");
    report_cmd->add_option("--runs", report.run_dirs, "Run directories")->required();
    report_cmd->add_option("--out", report.out, "Output directory")->required();

    std::vector<const char*> cargv;
    cargv.reserve(argv.size() + 1);
    if (argv.empty()) {
        cargv.push_back("alsr");
    }
    for (const auto& a : argv) {
        cargv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        std::string text = app.help();
        for (auto* sub : app.get_subcommands()) {
            text = sub->help();
        }
        throw HelpRequested(text);
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), kExitUsage);
    }

    if (train_cmd->parsed()) {
        if (*train_seed_opt) {
            train.seed = train_seed;
        }
        return train;
    }
    if (eval_cmd->parsed()) {
        if (*eval_seed_opt) {
            eval.seed = eval_seed;
        }
        return eval;
    }
    if (lab_cmd->parsed()) {
        if (*lab_res_opt) {
            lab.resolution = lab_resolution;
        }
        return lab;
    }
    if (ablate_cmd->parsed()) {
        return ablate;
    }
    return report;
}

ReportOutcome assemble_report(const std::vector<fs::path>& run_dirs, const fs::path& out) {
    ensure_dir(out);
    ReportOutcome outcome;
    std::vector<RunRow> rows;
    std::ostringstream heatmaps;
    heatmaps << "run," << kHeatmapHeader << '\n';

    for (const auto& dir : run_dirs) {
        const std::string label = dir.generic_string();
        try {
            const auto doc = nlohmann::json::parse(read_file(dir / "metrics.json"));
            RunRow row;
            row.label = label;
            row.alpha = doc.at("alpha").get<double>();
            row.kernel = doc.at("kernel").get<std::string>();
            row.seed = doc.at("seed").get<std::uint64_t>();
            row.energy = doc.at("final").at("energy_distance").get<double>();
            row.sliced = doc.at("final").at("sliced_wasserstein").get<double>();
            const auto& vc = doc.at("variance_concentration");
            if (!vc.empty() && !vc.back().at("value").is_null()) {
                row.concentration = vc.back().at("value").get<double>();
            }
            const auto heat = read_file(dir / "heatmap.csv");
            std::istringstream lines(heat);
            std::string line;
            std::getline(lines, line);
            if (line != kHeatmapHeader) {
                throw IoError("heatmap.csv has an unexpected header");
            }
            std::ostringstream rows_for_run;
            while (std::getline(lines, line)) {
                if (!line.empty()) {
                    rows_for_run << label << ',' << line << '\n';
                }
            }
            heatmaps << rows_for_run.str();
            rows.push_back(std::move(row));
            ++outcome.runs_ok;
        } catch (const std::exception& e) {
            outcome.errors.push_back(label + ": " + e.what());
        }
    }

    // Group by method; baseline first, then alpha ascending, then kernel.
    std::map<std::tuple<bool, double, std::string>, std::vector<RunRow>> groups;
    for (const auto& row : rows) {
        const bool adaptive = row.alpha != 0.0;
        groups[{adaptive, adaptive ? row.alpha : 0.0, adaptive ? row.kernel : std::string{}}].push_back(row);
    }

    std::ostringstream csv;
    csv << kAblationMetricNote << '\n';
    csv << "method,alpha,kernel,n_runs,seeds,energy_mean,energy_std,sw_mean,sw_std,"
           "variance_concentration_mean,variance_concentration_std\n";
    std::ostringstream md_table;
    md_table << "| method | runs | energy distance (mean ± std) | sliced W1 (mean ± std) | variance concentration |\n"
             << "|---|---|---|---|---|\n";
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(), [](const RunRow& a, const RunRow& b) {
            return std::tie(a.seed, a.label) < std::tie(b.seed, b.label);
        });
        std::vector<double> energy;
        std::vector<double> sliced;
        std::vector<double> conc;
        std::string seeds;
        for (const auto& m : members) {
            energy.push_back(m.energy);
            sliced.push_back(m.sliced);
            if (m.concentration) {
                conc.push_back(*m.concentration);
            }
            seeds += (seeds.empty() ? "" : ";") + std::to_string(m.seed);
        }
        const auto& [adaptive, alpha, kernel] = key;
        const std::string name = method_name(alpha, adaptive ? kernel : members.front().kernel);
        const auto e = summarize(energy);
        const auto s = summarize(sliced);
        const std::optional<SeedSummary> c = conc.empty() ? std::nullopt : std::optional(summarize(conc));
        csv << '"' << name << "\"," << format_real(alpha) << ',' << (adaptive ? kernel : std::string{}) << ','
            << members.size() << ',' << seeds << ',' << format_real(e.mean) << ',' << opt_real(e.std) << ','
            << format_real(s.mean) << ',' << opt_real(s.std) << ',' << (c ? format_real(c->mean) : std::string{})
            << ',' << (c ? opt_real(c->std) : std::string{}) << '\n';
        auto pm = [](const SeedSummary& v) {
            return v.std ? fmt::format("{} ± {}", format_real(v.mean), format_real(*v.std)) : format_real(v.mean);
        };
        md_table << "| " << name << " | " << members.size() << " | " << pm(e) << " | " << pm(s) << " | "
                 << (c ? pm(*c) : std::string("n/a")) << " |\n";
    }

    std::vector<std::string> files = {"comparison.csv", "heatmaps.csv", "summary.md", "manifest.json"};
    write_file(out / "comparison.csv", csv.str());
    write_file(out / "heatmaps.csv", heatmaps.str());
    if (!outcome.errors.empty()) {
        std::ostringstream err;
        err << "run,error\n";
        for (const auto& e : outcome.errors) {
            const auto colon = e.find(": ");
            std::string msg = e.substr(colon + 2);
            std::replace(msg.begin(), msg.end(), '"', '\'');
            err << e.substr(0, colon) << ",\"" << msg << "\"\n";
        }
        write_file(out / "errors.csv", err.str());
        files.insert(files.begin() + 2, "errors.csv");
    }

    std::ostringstream md;
    md << "# Run comparison\n\n"
       << "Metrics: energy distance and sliced Wasserstein-1 between generated and held-out 2-D samples; they "
          "stand in for FID. Spread is the sample standard deviation across seeds. Variance concentration is the "
          "coefficient of variation of per-log-SNR-bin loss variances at the final telemetry snapshot.\n\n"
       << md_table.str() << '\n';
    if (!outcome.errors.empty()) {
        md << "## Errors\n\n";
        for (const auto& e : outcome.errors) {
            md << "- " << e << '\n';
        }
        md << '\n';
    }
    md << "## Files\n\n";
    for (const auto& f : files) {
        md << "- `" << f << "`\n";
    }
    write_file(out / "summary.md", md.str());
    write_manifest(out);
    return outcome;
}

int execute(const Command& command, std::ostream& log) {
    return std::visit(Overloaded{
                          [&](const TrainCommand& c) { return run_train(c, log); },
                          [&](const EvalCommand& c) { return run_eval(c, log); },
                          [&](const VarianceLabCommand& c) { return run_variance_lab(c, log); },
                          [&](const AblateCommand& c) { return run_ablate(c, log); },
                          [&](const ReportCommand& c) { return run_report(c, log); },
                      },
                      command);
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    Command command;
    try {
        command = parse_args(argv);
    } catch (const HelpRequested& help) {
        out << help.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return e.exit_code();
    }
    try {
        return execute(command, err);
    } catch (const TrainingDiverged& e) {
        err << "error: " << e.what() << "\n" << e.diagnostic();
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace alsr::cli
