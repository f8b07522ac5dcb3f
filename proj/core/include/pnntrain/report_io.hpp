#pragma once

#include <string>
#include <vector>

#include "pnntrain/pipeline.hpp"

namespace pnntrain {

// Human-readable block, one report per trial. Deterministic: no
// timestamps, no paths, fixed field order and precision.
std::string format_report(const ExperimentReport& report);

void write_report_file(const std::vector<ExperimentReport>& reports,
                       const std::string& path);

// One row per trial:
// method,seed,error_percent,n_labeled,n_unlabeled,n_test,
// pseudo_label_accuracy,n_pseudo_labeled,sigma,kernel,gamma,c,
// solver_iterations,solver_converged,support_vectors
void write_runs_csv(const std::vector<ExperimentReport>& reports,
                    const std::string& path);

// Per-method aggregate over trials. The spread is the sample standard
// deviation (n-1 denominator); zero for a single trial.
struct MethodSummary {
    std::string method;
    int trials = 0;
    double error_mean = 0.0;
    double error_std = 0.0;
    double error_min = 0.0;
    double error_max = 0.0;
    double pseudo_accuracy_mean = 0.0;  // NaN if never measured
};

std::vector<MethodSummary> summarize_reports(
    const std::vector<ExperimentReport>& reports);

// method,trials,error_mean,error_std,error_min,error_max,pseudo_accuracy_mean
void write_summary_csv(const std::vector<MethodSummary>& summaries,
                       const std::string& path);

}  // namespace pnntrain
