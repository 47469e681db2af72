#include <cmath>
#include <filesystem>
#include <vector>

#include <gtest/gtest.h>

#include <alsr/errors.hpp>
#include <alsr/rng.hpp>
#include <alsr/snr_domain.hpp>
#include <alsr/telemetry.hpp>
#include <alsr/text_format.hpp>

#include "oracles.hpp"

namespace {

using alsr::BinGrid;
using alsr::BinnedStats;

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("alsr_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

TEST(Telemetry, ConstantValues) {
    BinnedStats s(BinGrid{-1.0, 1.0, 4});
    for (int i = 0; i < 3; ++i) {
        s.record(0.1, 2.0);
    }
    const auto& b = s.bin(s.bin_index(0.1));
    EXPECT_EQ(b.count, 3u);
    EXPECT_EQ(b.mean, 2.0);
    EXPECT_EQ(*b.variance(), 0.0);
}

TEST(Telemetry, SmallHandExample) {
    BinnedStats s(BinGrid{-1.0, 1.0, 4});
    for (double v : {1.0, 2.0, 3.0}) {
        s.record(-0.9, v);
    }
    EXPECT_EQ(s.bin(0).mean, 2.0);
    EXPECT_DOUBLE_EQ(*s.bin(0).variance(), 1.0);
    EXPECT_FALSE(s.bin(1).variance().has_value());
}

TEST(Telemetry, GridValidation) {
    EXPECT_THROW(BinnedStats(BinGrid{1.0, 1.0, 4}), alsr::ContractViolation);
    EXPECT_THROW(BinnedStats(BinGrid{-1.0, 1.0, 1}), alsr::ContractViolation);
    BinnedStats s;
    EXPECT_THROW(s.record(std::nan(""), 1.0), alsr::ContractViolation);
}

TEST(Telemetry, BinLocationAndClamping) {
    BinnedStats s(BinGrid{-12.0, 12.0, 32});
    EXPECT_EQ(s.bin_index(-12.0), 0);
    EXPECT_EQ(s.bin_index(-11.26), 0);
    EXPECT_EQ(s.bin_index(-11.25), 1);
    EXPECT_EQ(s.bin_index(11.99), 31);
    s.record(-50.0, 1.0);
    s.record(12.0, 1.0);
    s.record(40.0, 1.0);
    s.record(0.0, 1.0);
    EXPECT_EQ(s.out_of_range_low(), 1u);
    EXPECT_EQ(s.out_of_range_high(), 2u);
    EXPECT_EQ(s.bin(0).count, 1u);
    EXPECT_EQ(s.bin(31).count, 2u);
    EXPECT_EQ(s.total_recorded(), 4u);
}

void expect_matches_two_pass(const BinnedStats& s, const std::vector<std::vector<double>>& per_bin) {
    for (int b = 0; b < s.grid().n_bins; ++b) {
        const auto& values = per_bin[static_cast<std::size_t>(b)];
        ASSERT_EQ(s.bin(b).count, values.size());
        if (values.size() < 2) {
            continue;
        }
        const auto ref = oracle::two_pass(values);
        EXPECT_LT(oracle::relative_error(s.bin(b).mean, ref.mean), 1e-9);
        EXPECT_LT(oracle::relative_error(*s.bin(b).variance(), ref.variance), 1e-9);
    }
}

TEST(Telemetry, StreamingMatchesTwoPass) {
    alsr::Rng rng(31);
    std::uniform_real_distribution<double> lam(-12.0, 12.0);
    std::exponential_distribution<double> loss(0.7);
    BinnedStats s(BinGrid{-12.0, 12.0, 8});
    std::vector<std::vector<double>> per_bin(8);
    for (int i = 0; i < 10000; ++i) {
        const double l = lam(rng);
        const double v = loss(rng);
        s.record(l, v);
        per_bin[static_cast<std::size_t>(s.bin_index(l))].push_back(v);
    }
    expect_matches_two_pass(s, per_bin);
}

TEST(Telemetry, LargeOffsetStability) {
    alsr::Rng rng(32);
    std::uniform_real_distribution<double> lam(-12.0, 12.0);
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    BinnedStats s(BinGrid{-12.0, 12.0, 4});
    std::vector<std::vector<double>> per_bin(4);
    for (int i = 0; i < 10000; ++i) {
        const double l = lam(rng);
        const double v = 1e6 + noise(rng);
        s.record(l, v);
        per_bin[static_cast<std::size_t>(s.bin_index(l))].push_back(v);
    }
    expect_matches_two_pass(s, per_bin);
}

TEST(Telemetry, MergeEqualsConcatenation) {
    alsr::Rng rng(33);
    std::uniform_real_distribution<double> lam(-14.0, 14.0);
    std::uniform_real_distribution<double> loss(0.0, 5.0);
    BinnedStats left;
    BinnedStats right;
    BinnedStats all;
    for (int i = 0; i < 5000; ++i) {
        const double l = lam(rng);
        const double v = 1e3 + loss(rng);
        (i % 3 == 0 ? left : right).record(l, v);
        all.record(l, v);
    }
    left.merge(right);
    EXPECT_EQ(left.total_recorded(), all.total_recorded());
    EXPECT_EQ(left.out_of_range_low(), all.out_of_range_low());
    EXPECT_EQ(left.out_of_range_high(), all.out_of_range_high());
    for (int b = 0; b < all.grid().n_bins; ++b) {
        EXPECT_EQ(left.bin(b).count, all.bin(b).count);
        if (all.bin(b).count >= 2) {
            EXPECT_LT(oracle::relative_error(left.bin(b).mean, all.bin(b).mean), 1e-9);
            EXPECT_LT(oracle::relative_error(*left.bin(b).variance(), *all.bin(b).variance()), 1e-9);
        }
    }
    EXPECT_THROW(left.merge(BinnedStats(BinGrid{-1.0, 1.0, 32})), alsr::ContractViolation);
}

TEST(Telemetry, CountConservation) {
    alsr::Rng rng(34);
    std::normal_distribution<double> lam(0.0, 10.0);
    BinnedStats s;
    for (int i = 1; i <= 3000; ++i) {
        s.record(lam(rng), 1.0);
        std::uint64_t sum = 0;
        for (const auto& b : s.bins()) {
            sum += b.count;
        }
        // Clamped samples live in an edge bin and in their out-of-range counter.
        ASSERT_EQ(sum, s.total_recorded());
        ASSERT_EQ(s.total_recorded(), static_cast<std::uint64_t>(i));
        for (const auto& b : s.bins()) {
            ASSERT_GE(b.m2, 0.0);
        }
    }
}

TEST(Telemetry, SnapshotsAreFrozen) {
    BinnedStats s;
    const auto empty = alsr::snapshot(s, 0);
    for (const auto& b : empty.stats.bins()) {
        EXPECT_EQ(b.count, 0u);
        EXPECT_FALSE(b.variance().has_value());
    }
    s.record(1.0, 1.0);
    s.record(1.0, 3.0);
    const auto first = alsr::snapshot(s, 10);
    s.record(1.0, 5.0);
    s.record(-4.0, 1.0);
    const auto second = alsr::snapshot(s, 20);
    EXPECT_EQ(first.stats.total_recorded(), 2u);
    EXPECT_EQ(first.stats.bin(s.bin_index(1.0)).mean, 2.0);
    for (int b = 0; b < s.grid().n_bins; ++b) {
        EXPECT_LE(first.stats.bin(b).count, second.stats.bin(b).count);
    }
}

TEST(Telemetry, HeatmapExportRoundTrip) {
    const auto dir = scratch_dir("heatmap");
    alsr::Rng rng(35);
    std::uniform_real_distribution<double> lam(-2.0, 2.0);
    std::uniform_real_distribution<double> loss(0.0, 1.0);
    BinnedStats s(BinGrid{-2.0, 2.0, 4});
    std::vector<alsr::StageSnapshot> snaps;
    for (int i = 0; i < 50; ++i) {
        s.record(lam(rng), loss(rng) / 3.0);
    }
    snaps.push_back(alsr::snapshot(s, 5));
    for (int i = 0; i < 50; ++i) {
        s.record(lam(rng), loss(rng) * 7.0);
    }
    snaps.push_back(alsr::snapshot(s, 10));
    const auto path = dir / "heatmap.csv";
    alsr::export_heatmap(snaps, path);

    const std::string text = alsr::read_file(path);
    EXPECT_EQ(text.substr(0, text.find('\n')), alsr::kHeatmapHeader);
    const auto rows = alsr::read_heatmap(path);
    ASSERT_EQ(rows.size(), 8u);
    const auto direct = alsr::heatmap_rows(snaps);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].step, direct[i].step);
        EXPECT_EQ(rows[i].count, direct[i].count);
        EXPECT_EQ(alsr::format_real(rows[i].mean), alsr::format_real(direct[i].mean));
        ASSERT_EQ(rows[i].variance.has_value(), direct[i].variance.has_value());
        if (rows[i].variance) {
            EXPECT_EQ(alsr::format_real(*rows[i].variance), alsr::format_real(*direct[i].variance));
        }
    }
    // Bin edges partition the grid exactly.
    EXPECT_EQ(rows[0].lambda_lo, -2.0);
    EXPECT_EQ(rows[3].lambda_hi, 2.0);
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_EQ(rows[i].lambda_lo, rows[i - 1].lambda_hi);
    }
    EXPECT_THROW(alsr::export_heatmap({}, path), alsr::ContractViolation);
    EXPECT_THROW(alsr::export_heatmap(snaps, dir / "missing" / "x.csv"), alsr::IoError);
}

TEST(Telemetry, OneSnapshotFourBinsGivesFourRows) {
    const auto dir = scratch_dir("heatmap4");
    BinnedStats s(BinGrid{0.0, 4.0, 4});
    s.record(0.5, 1.0);
    const std::vector<alsr::StageSnapshot> snaps{alsr::snapshot(s, 1)};
    alsr::export_heatmap(snaps, dir / "h.csv");
    const std::string text = alsr::read_file(dir / "h.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
    EXPECT_NE(text.find("\n1,0,0,1,1,1,\n"), std::string::npos);
}

TEST(Telemetry, VarianceConcentrationExamples) {
    EXPECT_EQ(alsr::variance_concentration(std::vector<double>{2.0, 2.0, 2.0}), 0.0);
    EXPECT_NEAR(alsr::variance_concentration(std::vector<double>{1.0, 1.0, 4.0, 4.0}), 0.6, 1e-15);
    EXPECT_THROW(alsr::variance_concentration(std::vector<double>{1.0}), alsr::InsufficientData);
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    double prev = alsr::variance_concentration(v);
    for (int i = 0; i < 10; ++i) {
        v[3] *= 1.5;
        const double next = alsr::variance_concentration(v);
        EXPECT_GT(next, prev);
        prev = next;
    }
}

TEST(Telemetry, VarianceConcentrationFromStats) {
    BinnedStats s(BinGrid{0.0, 4.0, 4});
    // Bins 0 and 1 get variance 1, bin 2 variance 4, bin 3 a single sample (skipped).
    for (double v : {0.0, 1.0, 2.0}) {
        s.record(0.5, v);
        s.record(1.5, v + 10.0);
        s.record(2.5, 2.0 * v);
    }
    s.record(3.5, 100.0);
    const double want = alsr::variance_concentration(std::vector<double>{1.0, 1.0, 4.0});
    EXPECT_NEAR(alsr::variance_concentration(s), want, 1e-15);
    BinnedStats sparse(BinGrid{0.0, 4.0, 4});
    sparse.record(0.5, 1.0);
    sparse.record(0.5, 2.0);
    EXPECT_THROW(alsr::variance_concentration(sparse), alsr::InsufficientData);
}

TEST(Telemetry, SamplingDensityStableAcrossHalves) {
    alsr::Rng rng(36);
    const alsr::SamplerSpec spec = alsr::LogNormal{};
    const int half = 20000;
    BinnedStats first;
    BinnedStats second;
    for (int i = 0; i < 2 * half; ++i) {
        const double l = alsr::sigma_to_logsnr(alsr::sample_noise_scale(spec, rng), 0.5).value();
        (i < half ? first : second).record(l, 1.0);
    }
    for (int b = 0; b < first.grid().n_bins; ++b) {
        const double p1 = static_cast<double>(first.bin(b).count) / half;
        const double p2 = static_cast<double>(second.bin(b).count) / half;
        const double pooled = 0.5 * (p1 + p2);
        const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / half);
        if (se == 0.0) {
            continue;
        }
        EXPECT_LT(std::abs(p1 - p2), 3.0 * se) << "bin " << b;
    }
}

}  // namespace
