#pragma once

#include <filesystem>
#include <string>

namespace acceptance {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome edm_identities();
Outcome weight_kernels();
Outcome variance_lab_oracle();
Outcome gradient_check();
Outcome telemetry_correctness();

// Criteria 5-8 and 11 share the same reference runs, trained once on first use.
class TrainingSuite {
public:
    explicit TrainingSuite(std::filesystem::path work_dir);
    ~TrainingSuite();

    Outcome oracle_convergence();
    Outcome baseline_recovery();
    Outcome variance_flattening();
    Outcome quality_stability();
    Outcome ablation_shape();
    Outcome stability_regression();

private:
    struct State;
    State& state();

    std::filesystem::path work_dir_;
    State* state_ = nullptr;
};

}  // namespace acceptance
