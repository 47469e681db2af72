#include "alsr/ablation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "alsr/errors.hpp"
#include "alsr/run_io.hpp"
#include "alsr/text_format.hpp"

namespace alsr {

SeedSummary summarize(const std::vector<double>& values) {
    if (values.empty()) {
        throw InsufficientData("summarize: no values");
    }
    SeedSummary s;
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    s.mean = total / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::size_t AblationCell::ok_count() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.ok; }));
}

bool AblationTable::all_ok() const {
    return std::none_of(cells.begin(), cells.end(), [](const auto& c) { return c.failed(); });
}

std::string ablation_run_name(double alpha, Kernel kernel, std::uint64_t seed) {
    return fmt::format("alpha{}_{}_seed{}", format_real(alpha), to_string(kernel), seed);
}

AblationTable run_ablation(const RunConfig& base, const std::vector<double>& alphas,
                           const std::vector<Kernel>& kernels, const std::vector<std::uint64_t>& seeds,
                           const AblationOptions& options) {
    if (alphas.empty() || kernels.empty() || seeds.empty()) {
        throw ContractViolation("run_ablation: alphas, kernels and seeds must be non-empty");
    }
    AblationTable table;
    table.seeds = seeds;
    std::sort(table.seeds.begin(), table.seeds.end());
    table.seeds.erase(std::unique(table.seeds.begin(), table.seeds.end()), table.seeds.end());

    struct Job {
        std::size_t cell;
        std::size_t slot;
        RunConfig cfg;
    };
    std::vector<Job> jobs;
    for (double alpha : alphas) {
        for (Kernel kernel : kernels) {
            AblationCell cell;
            cell.alpha = alpha;
            cell.kernel = kernel;
            for (std::size_t s = 0; s < table.seeds.size(); ++s) {
                RunConfig cfg = base;
                cfg.weight.alpha = alpha;
                cfg.weight.kernel = kernel;
                cfg.seed = table.seeds[s];
                jobs.push_back(Job{table.cells.size(), s, std::move(cfg)});
                AblationRun run;
                run.seed = table.seeds[s];
                cell.runs.push_back(std::move(run));
            }
            table.cells.push_back(std::move(cell));
        }
    }

    auto execute = [&](const Job& job) {
        AblationRun& out = table.cells[job.cell].runs[job.slot];
        try {
            const RunReport report = options.run(job.cfg);
            if (options.out_dir) {
                write_run_outputs(report,
                                  *options.out_dir / "runs" /
                                      ablation_run_name(job.cfg.weight.alpha, job.cfg.weight.kernel, job.cfg.seed));
            }
            out.final_metrics = report.final_metrics;
            out.evals = report.evals;
            out.ok = true;
        } catch (const std::exception& e) {
            out.ok = false;
            out.error = e.what();
        }
    };

    const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(jobs.size())));
    if (threads == 1) {
        for (const auto& job : jobs) {
            execute(job);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++) {
                    execute(jobs[i]);
                }
            });
        }
    }

    for (auto& cell : table.cells) {
        std::vector<double> energy;
        std::vector<double> sliced;
        for (const auto& run : cell.runs) {
            if (run.ok) {
                energy.push_back(run.final_metrics.energy_distance);
                sliced.push_back(run.final_metrics.sliced_wasserstein);
            }
        }
        if (!energy.empty()) {
            cell.energy = summarize(energy);
            cell.sliced = summarize(sliced);
        }
    }
    return table;
}

std::string ablation_csv(const AblationTable& table) {
    std::ostringstream out;
    out << kAblationMetricNote << '\n';
    out << "alpha,kernel,status,n_ok,energy_mean,energy_std,sw_mean,sw_std";
    for (auto s : table.seeds) {
        out << ",energy_seed" << s;
    }
    for (auto s : table.seeds) {
        out << ",sw_seed" << s;
    }
    out << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; };
    for (const auto& cell : table.cells) {
        out << format_real(cell.alpha) << ',' << to_string(cell.kernel) << ',' << (cell.failed() ? "failed" : "ok")
            << ',' << cell.ok_count() << ',';
        if (cell.energy) {
            out << format_real(cell.energy->mean) << ',' << opt(cell.energy->std) << ','
                << format_real(cell.sliced->mean) << ',' << opt(cell.sliced->std);
        } else {
            out << ",,,";
        }
        for (const auto& run : cell.runs) {
            out << ',' << (run.ok ? format_real(run.final_metrics.energy_distance) : std::string{});
        }
        for (const auto& run : cell.runs) {
            out << ',' << (run.ok ? format_real(run.final_metrics.sliced_wasserstein) : std::string{});
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace alsr
