#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnntrain/dataset.hpp"
#include "pnntrain/pnn.hpp"
#include "pnntrain/svm.hpp"

namespace pnntrain {

struct PipelineConfig {
    double sigma = 1.0;  // Parzen window width for the pseudo-labeler
    KernelSpec kernel{KernelFamily::rbf, 1.0};
    double c = 1.0;
    double tol = 1e-3;
    long max_iter = 0;  // 0: 10 * n * num_classes per binary subproblem
    std::size_t cache_bytes = std::size_t(512) << 20;
    bool strict = false;  // raise ConvergenceError if any solve caps out

    // Self-training schedule: per round, move this share of the pool
    // (at least one sample) into the labeled set, for at most this many
    // rounds; anything still unlabeled after that is left out.
    double self_fraction = 0.1;
    int self_max_rounds = 50;
};

struct ConfusionMatrix {
    std::vector<long> counts;  // row = true class, column = predicted
    int num_classes = 0;

    long& at(int truth, int predicted) {
        return counts[static_cast<std::size_t>(truth) *
                          static_cast<std::size_t>(num_classes) +
                      static_cast<std::size_t>(predicted)];
    }
    long at(int truth, int predicted) const {
        return counts[static_cast<std::size_t>(truth) *
                          static_cast<std::size_t>(num_classes) +
                      static_cast<std::size_t>(predicted)];
    }
};

struct EvalResult {
    double error_percent = 0.0;
    ConfusionMatrix confusion;
};

EvalResult evaluate(const std::vector<int>& predictions,
                    const std::vector<Sample>& test, int num_classes);

// Final classifier of a pipeline. Two classes use a single binary
// machine with class 1 on the positive side; more classes use
// one-against-all with argmax selection.
class SvmClassifier {
public:
    SvmClassifier() = default;  // empty shell; train() produces usable ones

    static SvmClassifier train(const std::vector<Sample>& labeled,
                               int num_classes, const PipelineConfig& config,
                               std::vector<SolveStats>* stats_out = nullptr);

    int predict(const std::vector<double>& x) const;
    // Binary: |decision value|. One-against-all: largest per-class value.
    double confidence(const std::vector<double>& x) const;
    double binary_decision(const std::vector<double>& x) const;

    bool is_binary() const { return binary_.has_value(); }
    int num_classes() const { return num_classes_; }
    const SvmBinaryModel& binary_model() const { return *binary_; }
    const MulticlassModel& multiclass_model() const { return *multi_; }

private:
    std::optional<SvmBinaryModel> binary_;
    std::optional<MulticlassModel> multi_;
    int num_classes_ = 0;
};

// Aggregate view of the dual solves behind one classifier.
struct SolverSummary {
    long total_iterations = 0;
    double max_kkt_gap = 0.0;
    bool all_converged = true;
    std::size_t total_support_vectors = 0;
    int solves = 0;
};

SolverSummary summarize_solves(const std::vector<SolveStats>& stats);

struct ExperimentReport {
    std::string method;
    double test_error_percent = 0.0;  // NaN when there is no test set
    std::size_t n_labeled = 0;
    std::size_t n_unlabeled = 0;
    std::size_t n_test = 0;
    int num_classes = 0;
    int dim = 0;
    std::uint64_t seed = 0;

    double sigma = 0.0;
    std::string kernel;
    double gamma = 0.0;
    double c = 0.0;
    double tol = 0.0;

    ConfusionMatrix confusion;

    // Diagnostics. Pseudo-label accuracy is measured against the held
    // ground truth of the pool and never feeds back into training; it is
    // NaN when nothing was pseudo-labeled. Confidence is the
    // pseudo-labeler's own score for the labels it assigned.
    double pseudo_label_accuracy = 0.0;
    std::size_t n_pseudo_labeled = 0;
    double confidence_mean = 0.0;
    double confidence_min = 0.0;
    double confidence_max = 0.0;

    SolverSummary solver;
};

struct PipelineOutcome {
    ExperimentReport report;
    SvmClassifier classifier;
    // Exactly what the final machine was trained on.
    std::vector<Sample> training_set;
    // Labels assigned to the pool, aligned with split.unlabeled();
    // -1 marks samples the method never labeled.
    std::vector<int> pseudo_labels;
};

// Parzen network pseudo-labels the whole pool in one shot, then a
// kernel machine trains on labeled + pseudo-labeled data.
PipelineOutcome pnn_training_pipeline(const SplitDataset& split,
                                      const PipelineConfig& config);

// The machine labels its own most confident pool samples a slice at a
// time, retraining between slices.
PipelineOutcome self_training_pipeline(const SplitDataset& split,
                                       const PipelineConfig& config);

// Labeled data only; the pool is ignored.
PipelineOutcome supervised_svm_baseline(const SplitDataset& split,
                                        const PipelineConfig& config);

// Leave-one-out error of the Parzen classifier on the labeled set for
// each candidate width; returns the first width reaching the minimum.
double select_sigma_loo(const std::vector<Sample>& labeled,
                        const std::vector<double>& grid, int num_classes = 0);

}  // namespace pnntrain
