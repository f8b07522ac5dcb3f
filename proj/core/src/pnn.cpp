#include "pnntrain/pnn.hpp"

#include <algorithm>
#include <cmath>

#include "pnntrain/errors.hpp"

namespace pnntrain {

std::vector<double> normalize(const std::vector<double>& x) {
    double ss = 0.0;
    for (double v : x) ss += v * v;
    if (!(ss >= 1e-24)) {  // norm < 1e-12, or non-finite input
        throw DataError("normalize: zero-norm vector");
    }
    const double inv = 1.0 / std::sqrt(ss);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * inv;
    return out;
}

PnnModel pnn_train(const std::vector<Sample>& labeled, double sigma,
                   int num_classes) {
    if (labeled.empty()) throw DataError("pnn: no training samples");
    if (!(sigma > 0.0)) throw ConfigError("pnn: sigma must be positive");

    const std::size_t dim = labeled[0].features.size();
    int max_label = 0;
    for (const auto& s : labeled) {
        if (!s.label) throw DataError("pnn: training sample has no label");
        if (*s.label < 0) throw DataError("pnn: negative class label");
        if (s.features.size() != dim) {
            throw DataError("pnn: inconsistent feature dimensions");
        }
        max_label = std::max(max_label, *s.label);
    }
    if (num_classes == 0) num_classes = max_label + 1;
    if (max_label >= num_classes) {
        throw DataError("pnn: label outside declared class range");
    }

    PnnModel model;
    model.dim = static_cast<int>(dim);
    model.num_classes = num_classes;
    model.sigma = sigma;
    model.weights.reserve(labeled.size() * dim);
    model.categories.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        try {
            const std::vector<double> w = normalize(labeled[i].features);
            model.weights.insert(model.weights.end(), w.begin(), w.end());
        } catch (const DataError&) {
            throw DataError("pnn: sample " + std::to_string(i) +
                            " has a zero-norm feature vector");
        }
        model.categories.push_back(*labeled[i].label);
    }
    return model;
}

CategoryScores pnn_classify(const PnnModel& model, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(model.dim)) {
        throw DataError("pnn: pattern dimension mismatch");
    }
    const std::vector<double> xn = normalize(x);
    const std::size_t m = model.pattern_count();
    const auto dim = static_cast<std::size_t>(model.dim);

    std::vector<double> z(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double* w = model.pattern(k);
        double dot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dot += w[j] * xn[j];
        z[k] = dot;
    }

    CategoryScores scores;
    scores.g.assign(static_cast<std::size_t>(model.num_classes), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        scores.g[static_cast<std::size_t>(model.categories[k])] +=
            pnn_activation(z[k], model.sigma);
    }

    double best = -1.0;
    for (int c = 0; c < model.num_classes; ++c) {
        if (scores.g[static_cast<std::size_t>(c)] > best) {
            best = scores.g[static_cast<std::size_t>(c)];
            scores.predicted = c;
        }
    }

    if (best == 0.0) {
        // Every activation underflowed. Shift the exponents by the
        // largest z; the relative ordering of the category sums is
        // unchanged mathematically, but the leader survives in floating
        // point and the argmax degrades to nearest-by-cosine.
        const double zmax = *std::max_element(z.begin(), z.end());
        std::vector<double> shifted(static_cast<std::size_t>(model.num_classes),
                                    0.0);
        const double s2 = model.sigma * model.sigma;
        for (std::size_t k = 0; k < m; ++k) {
            shifted[static_cast<std::size_t>(model.categories[k])] +=
                std::exp((z[k] - zmax) / s2);
        }
        best = -1.0;
        for (int c = 0; c < model.num_classes; ++c) {
            if (shifted[static_cast<std::size_t>(c)] > best) {
                best = shifted[static_cast<std::size_t>(c)];
                scores.predicted = c;
            }
        }
    }
    return scores;
}

std::vector<CategoryScores> pnn_classify_batch(
    const PnnModel& model, const std::vector<Sample>& samples) {
    std::vector<CategoryScores> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            out.push_back(pnn_classify(model, samples[i].features));
        } catch (const DataError& e) {
            throw DataError("sample " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace pnntrain
