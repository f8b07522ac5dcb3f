#include "pnntrain/kernel.hpp"

#include <cmath>

#include "pnntrain/errors.hpp"

namespace pnntrain {

KernelFamily parse_kernel_family(const std::string& name) {
    if (name == "linear") return KernelFamily::linear;
    if (name == "rbf") return KernelFamily::rbf;
    throw ConfigError("unknown kernel family: " + name);
}

std::string kernel_family_name(KernelFamily family) {
    return family == KernelFamily::linear ? "linear" : "rbf";
}

double kernel_eval(const KernelSpec& spec, const double* x, const double* y,
                   std::size_t dim) {
    if (spec.family == KernelFamily::linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dot += x[j] * y[j];
        return dot;
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double d = x[j] - y[j];
        d2 += d * d;
    }
    return std::exp(-spec.gamma * d2);
}

double kernel_eval(const KernelSpec& spec, const std::vector<double>& x,
                   const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw DataError("kernel: dimension mismatch");
    }
    return kernel_eval(spec, x.data(), y.data(), x.size());
}

FeatureMatrix FeatureMatrix::from_samples(const std::vector<Sample>& samples) {
    FeatureMatrix m;
    if (samples.empty()) return m;
    m.cols = samples[0].features.size();
    m.values.reserve(samples.size() * m.cols);
    for (const auto& s : samples) {
        if (s.features.size() != m.cols) {
            throw DataError("feature matrix: inconsistent dimensions");
        }
        m.values.insert(m.values.end(), s.features.begin(), s.features.end());
    }
    m.rows = samples.size();
    return m;
}

}  // namespace pnntrain
