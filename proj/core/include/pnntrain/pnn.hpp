#pragma once

#include <cmath>
#include <vector>

#include "pnntrain/sample.hpp"

namespace pnntrain {

// Probabilistic neural network over unit-normalized patterns. Each
// stored pattern w is a weight row; a test pattern x is normalized and
// scored against every row by the cosine similarity z = w.x, passed
// through the activation exp((z - 1) / sigma^2). Category outputs are
// the activation sums per class.
struct PnnModel {
    std::vector<double> weights;  // m x dim, row-major, rows unit length
    std::vector<int> categories;  // class id per row
    int dim = 0;
    int num_classes = 0;
    double sigma = 1.0;

    std::size_t pattern_count() const { return categories.size(); }
    const double* pattern(std::size_t k) const {
        return weights.data() + k * static_cast<std::size_t>(dim);
    }
};

struct CategoryScores {
    std::vector<double> g;  // one activation sum per class
    int predicted = 0;      // argmax of g, ties to the lowest class id
};

// x scaled to unit L2 norm. A norm below 1e-12 has no direction to
// preserve and raises an error.
std::vector<double> normalize(const std::vector<double>& x);

inline double pnn_activation(double z, double sigma) {
    return std::exp((z - 1.0) / (sigma * sigma));
}

// Stores one normalized pattern per labeled sample. Every sample must
// carry a label; pass num_classes = 0 to derive it from the labels.
PnnModel pnn_train(const std::vector<Sample>& labeled, double sigma,
                   int num_classes = 0);

// Category sums are accumulated in stored-pattern order. When sigma is
// small enough that every activation underflows to zero, the argmax is
// recomputed with activations shifted by the largest z, which picks the
// class of the most-similar pattern; the returned g still holds the
// unshifted sums.
CategoryScores pnn_classify(const PnnModel& model, const std::vector<double>& x);

// Elementwise pnn_classify; a failing element reports its index.
std::vector<CategoryScores> pnn_classify_batch(
    const PnnModel& model, const std::vector<Sample>& samples);

}  // namespace pnntrain
