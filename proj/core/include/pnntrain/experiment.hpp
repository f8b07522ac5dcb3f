#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnntrain/pipeline.hpp"
#include "pnntrain/report_io.hpp"

namespace pnntrain {

enum class ExperimentKind { two_moons, usps, custom_file };
enum class Method { pnn_training, self_training, supervised };

Method parse_method(const std::string& name);
std::string method_name(Method method);
ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

// One experiment: a dataset recipe, a training method, hyperparameters,
// and output destinations. Trial t of `repeats` runs with seed
// (seed + t); the two-moons pool, its test draw, and the labeled split
// use separate streams derived from that trial seed.
struct RunSpec {
    ExperimentKind kind = ExperimentKind::two_moons;
    Method method = Method::pnn_training;

    double sigma = 1.0;
    // Non-empty: sigma is picked per trial by labeled-set leave-one-out
    // over this grid, overriding `sigma`.
    std::vector<double> sigma_grid;
    KernelFamily kernel_family = KernelFamily::rbf;
    double gamma = 0.0;  // 0 means 1/dim
    double c = 1.0;
    double tol = 1e-3;
    long max_iter = 0;
    std::size_t cache_bytes = std::size_t(512) << 20;
    bool strict = false;
    double self_fraction = 0.1;
    int self_max_rounds = 50;

    // two-moons recipe
    int n_per_class = 50;
    double noise_std = 0.1;
    int test_per_class = 500;

    // labeled split: a positive fraction wins over the per-class count
    int labeled_per_class = 10;
    double labeled_fraction = 0.0;

    // usps / custom-file recipe; resolved against $PNNTRAIN_DATA_DIR
    // when not found as given
    std::string train_path;
    std::string test_path;

    std::uint64_t seed = 1;
    int repeats = 0;  // 0 picks the kind default: 20 two-moons, else 1

    std::string out_dir;  // empty: write nothing
    std::string tag;      // output file prefix; empty: "<kind>-<method>"
    bool write_plot = false;     // first-trial decision map (2-D data only)
    std::string model_path;      // save the first trial's model here
};

struct RunSummary {
    std::vector<ExperimentReport> reports;  // one per trial
    MethodSummary aggregate;
};

// Executes the trials and writes <tag>-report.txt, <tag>-runs.csv and
// <tag>-summary.csv under out_dir (when set), plus <tag>-plot.csv and
// the model file when requested. All outputs are deterministic.
RunSummary run(const RunSpec& spec);

struct CompareResult {
    std::vector<ExperimentReport> reports;  // every method, every trial
    std::vector<MethodSummary> summaries;
    std::string table;  // formatted comparison, includes reference rows
};

// Paired comparison: all specs must share the dataset recipe, seed and
// repeats; each trial's split is built once and reused by every method.
// Published figures for methods this library does not implement are
// appended as fixed reference rows, marked as not recomputed.
CompareResult compare(const std::vector<RunSpec>& specs);

// Points plus a 200x200 decision-value grid over the bounding box with
// a 10% margin, for external plotting. Columns:
// x,y,true_label,pseudo_label,split,decision_value
void write_plot_csv(const SplitDataset& split, const SvmClassifier& classifier,
                    const std::vector<int>& pseudo_labels,
                    const std::string& path);

// $PNNTRAIN_DATA_DIR fallback for relative dataset paths.
std::string resolve_data_path(const std::string& path);

}  // namespace pnntrain
