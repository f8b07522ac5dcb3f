#pragma once

#include <cstddef>
#include <list>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pnntrain/kernel.hpp"

namespace pnntrain {

// Lazily computed kernel matrix rows with an LRU eviction policy. A row
// holds K(x_i, x_t) for all t. Pointers returned by row()/rows() stay
// valid only until the next fetch.
class KernelCache {
public:
    KernelCache(const FeatureMatrix& x, const KernelSpec& spec,
                std::size_t budget_bytes);

    std::size_t size() const { return x_.rows; }
    double diag(std::size_t i) const { return diag_[i]; }

    const double* row(std::size_t i);
    // Both rows valid simultaneously; eviction skips the pair.
    std::pair<const double*, const double*> rows(std::size_t i, std::size_t j);

    std::size_t computed_rows() const { return entries_.size(); }

private:
    const double* fetch(std::size_t i, std::size_t keep_a, std::size_t keep_b);
    void compute_row(std::size_t i, std::vector<double>& out) const;

    struct Entry {
        std::vector<double> values;
        std::list<std::size_t>::iterator lru_pos;
    };

    const FeatureMatrix& x_;
    KernelSpec spec_;
    std::size_t budget_rows_;
    std::vector<double> diag_;
    std::vector<double> sqnorm_;  // rbf shortcut: |x_i|^2
    std::list<std::size_t> lru_;  // front = most recent
    std::unordered_map<std::size_t, Entry> entries_;
};

struct SolveOptions {
    double c = 1.0;
    double tol = 1e-3;   // stop when the KKT gap falls below this
    long max_iter = 0;   // 0 picks 10 * n * num_classes_hint
    int num_classes_hint = 2;
    std::size_t cache_bytes = std::size_t(512) << 20;
    bool verify_ascent = false;  // audit that the dual never worsens
};

struct SolveStats {
    long iterations = 0;
    double kkt_gap = 0.0;
    bool converged = false;
    double dual_objective = 0.0;  // sum(alpha) - alpha'Q alpha / 2
    std::size_t support_vectors = 0;
};

// Kernel expansion f(x) = sum_k coeff_k K(sv_k, x) + bias, where
// coeff_k = alpha_k y_k from the dual solution.
struct SvmBinaryModel {
    FeatureMatrix support_vectors;
    std::vector<double> sv_coeffs;
    double bias = 0.0;
    KernelSpec kernel;
    double c = 1.0;
};

struct SolveResult {
    SvmBinaryModel model;
    SolveStats stats;
};

// Solves the soft-margin dual
//   min over alpha of alpha'Q alpha / 2 - sum(alpha)
//   subject to 0 <= alpha_i <= C and sum(alpha_i y_i) = 0,
// with Q_ij = y_i y_j K(x_i, x_j), by sequential minimal optimization
// on the maximal-violating pair. y entries must be +1 or -1 and both
// signs must occur. On hitting max_iter the best feasible point so far
// is returned with stats.converged = false.
SolveResult solve_dual(const FeatureMatrix& x, const std::vector<int>& y,
                       const KernelSpec& kernel, const SolveOptions& opts);

// Same, sharing a prebuilt cache (y is aligned with the cache's matrix).
SolveResult solve_dual(KernelCache& cache, const FeatureMatrix& x,
                       const std::vector<int>& y, const KernelSpec& kernel,
                       const SolveOptions& opts);

double decision_value(const SvmBinaryModel& model, const double* x,
                      std::size_t dim);

inline double decision_value(const SvmBinaryModel& model,
                             const std::vector<double>& x) {
    return decision_value(model, x.data(), x.size());
}

// Sign of the decision value; exact zero counts as +1.
inline int predict_binary(const SvmBinaryModel& model,
                          const std::vector<double>& x) {
    return decision_value(model, x) >= 0.0 ? +1 : -1;
}

// One-against-all: per_class[c] separates class c (+1) from the rest.
struct MulticlassModel {
    std::vector<SvmBinaryModel> per_class;
    int num_classes = 0;
};

struct MulticlassResult {
    MulticlassModel model;
    std::vector<SolveStats> stats;  // one per binary subproblem
};

// Labels are class ids in [0, num_classes). All subproblems share one
// kernel cache since they run over the same points.
MulticlassResult train_one_vs_all(const FeatureMatrix& x,
                                  const std::vector<int>& labels,
                                  int num_classes, const KernelSpec& kernel,
                                  const SolveOptions& opts);

std::vector<double> decision_values(const MulticlassModel& model,
                                    const std::vector<double>& x);

// Argmax of the per-class decision values, ties to the lowest class id.
int predict_multiclass(const MulticlassModel& model,
                       const std::vector<double>& x);

}  // namespace pnntrain
