#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajcomp/pipeline.hpp"

namespace trajcomp {

// Sweep grid for the batch-vs-online evaluation. Every sweep point fully
// determines a ScenarioConfig; repetitions vary the seed only.
struct ExperimentSpec {
    std::vector<double> gdrs = {0.1, 0.25, 0.5, 0.75, 1.0};
    std::vector<int> group_sizes = {1, 2, 4, 8, 16};
    std::vector<int> batch_periods = {100};
    std::vector<int> error_bounds = {0};
    int repetitions = 5;
    std::uint64_t seed_base = 1;
    int grid_width = 16;
    int grid_height = 16;
    int cluster_grid = 4;
    PstParams pst;
    PacketConfig packet;
    std::string scenario_name = "rpgm";
};

struct MetricRow {
    std::string scenario;
    double gdr = 0;
    int n = 0;
    int D = 0;
    int eps = 0;
    double raw_bytes = 0;          // per-update online accounting, no prediction
    double batch_bytes = 0;        // compressed packets, stream-only
    double batch_table_bytes = 0;  // packets plus canonical code lengths
    double huffman_only_bytes = 0; // batch path without the replace pass
    double online_bytes = 0;
    double online_pred_bytes = 0;
    double ratio = 0;              // raw / batch
    double ratio_huffman_only = 0;
    double ratio_online_pred = 0;
    double hit_rate = 0;           // predictor hit rate on the online path
    double batch_bytes_stddev = 0;
    int repetitions = 0;
};

// Metrics of one simulated batch at one sweep point and seed.
struct SingleRun {
    double raw_bytes = 0;
    double batch_bytes = 0;
    double batch_table_bytes = 0;
    double huffman_only_bytes = 0;
    double online_bytes = 0;
    double online_pred_bytes = 0;
    double hit_rate = 0;
};

// Simulate a warm-up batch, train the shared group model on it, then
// compress the evaluation batch and account both online baselines.
SingleRun run_scenario_once(const ScenarioConfig& config, const SensorGrid& grid,
                            const PstParams& pst, const PacketConfig& packet);

std::vector<MetricRow> run_experiment(const ExperimentSpec& spec);

enum class ReportFormat { Csv, CsvAndPlots };

// metrics.csv (fixed schema), bench_detail.csv, and the per-sweep SVG line
// plots. Returns the written file paths.
std::vector<std::string> emit_report(const std::vector<MetricRow>& rows,
                                     const std::string& out_dir, ReportFormat format);

} // namespace trajcomp
