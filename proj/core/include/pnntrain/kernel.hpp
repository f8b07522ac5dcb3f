#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pnntrain/sample.hpp"

namespace pnntrain {

enum class KernelFamily { linear, rbf };

struct KernelSpec {
    KernelFamily family = KernelFamily::rbf;
    double gamma = 1.0;  // rbf only: k(x,y) = exp(-gamma * |x-y|^2)
};

KernelFamily parse_kernel_family(const std::string& name);
std::string kernel_family_name(KernelFamily family);

double kernel_eval(const KernelSpec& spec, const double* x, const double* y,
                   std::size_t dim);

// Throws on dimension mismatch.
double kernel_eval(const KernelSpec& spec, const std::vector<double>& x,
                   const std::vector<double>& y);

// Dense row-major matrix of feature vectors.
struct FeatureMatrix {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;

    const double* row(std::size_t i) const { return values.data() + i * cols; }
    double* row(std::size_t i) { return values.data() + i * cols; }

    std::vector<double> row_vector(std::size_t i) const {
        return std::vector<double>(row(i), row(i) + cols);
    }

    void append_row(const double* src) {
        values.insert(values.end(), src, src + cols);
        ++rows;
    }

    static FeatureMatrix from_samples(const std::vector<Sample>& samples);
};

}  // namespace pnntrain
