#include "pnntrain/model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <string>

#include "pnntrain/errors.hpp"

namespace pnntrain {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw DataError("cannot open model file: " + path);
    return f;
}

void write_binary_block(std::FILE* f, const SvmBinaryModel& model) {
    std::fprintf(f, "svmtxt1 %s %.17g %.17g %zu %zu %.17g\n",
                 kernel_family_name(model.kernel.family).c_str(),
                 model.kernel.gamma, model.c, model.support_vectors.cols,
                 model.support_vectors.rows, model.bias);
    for (std::size_t k = 0; k < model.support_vectors.rows; ++k) {
        std::fprintf(f, "%.17g", model.sv_coeffs[k]);
        const double* row = model.support_vectors.row(k);
        for (std::size_t j = 0; j < model.support_vectors.cols; ++j) {
            std::fprintf(f, " %.17g", row[j]);
        }
        std::fputc('\n', f);
    }
}

SvmBinaryModel read_binary_block(std::FILE* f, const std::string& path) {
    char family[32];
    double gamma, c, bias;
    std::size_t dim, num_sv;
    if (std::fscanf(f, "%31s %lf %lf %zu %zu %lf", family, &gamma, &c, &dim,
                    &num_sv, &bias) != 6) {
        throw DataError(path + ": malformed model header");
    }
    SvmBinaryModel model;
    try {
        model.kernel.family = parse_kernel_family(family);
    } catch (const ConfigError&) {
        throw DataError(path + ": unknown kernel family '" +
                        std::string(family) + "'");
    }
    model.kernel.gamma = gamma;
    model.c = c;
    model.bias = bias;
    model.support_vectors.cols = dim;
    model.support_vectors.values.reserve(num_sv * dim);
    model.sv_coeffs.reserve(num_sv);
    for (std::size_t k = 0; k < num_sv; ++k) {
        double coeff;
        if (std::fscanf(f, "%lf", &coeff) != 1) {
            throw DataError(path + ": truncated support vector list");
        }
        model.sv_coeffs.push_back(coeff);
        for (std::size_t j = 0; j < dim; ++j) {
            double v;
            if (std::fscanf(f, "%lf", &v) != 1) {
                throw DataError(path + ": truncated support vector row");
            }
            model.support_vectors.values.push_back(v);
        }
        ++model.support_vectors.rows;
    }
    return model;
}

std::string read_magic(std::FILE* f, const std::string& path) {
    char magic[32];
    if (std::fscanf(f, "%31s", magic) != 1) {
        throw DataError(path + ": empty model file");
    }
    return magic;
}

}  // namespace

void save_binary_model(const SvmBinaryModel& model, const std::string& path) {
    FilePtr f = open_or_throw(path, "w");
    write_binary_block(f.get(), model);
}

SvmBinaryModel load_binary_model(const std::string& path) {
    FilePtr f = open_or_throw(path, "r");
    const std::string magic = read_magic(f.get(), path);
    if (magic != "svmtxt1") {
        throw DataError(path + ": not a binary model file (got '" + magic + "')");
    }
    return read_binary_block(f.get(), path);
}

void save_multiclass_model(const MulticlassModel& model,
                           const std::string& path) {
    FilePtr f = open_or_throw(path, "w");
    std::fprintf(f.get(), "svmovr1 %d\n", model.num_classes);
    for (const auto& m : model.per_class) write_binary_block(f.get(), m);
}

MulticlassModel load_multiclass_model(const std::string& path) {
    FilePtr f = open_or_throw(path, "r");
    const std::string magic = read_magic(f.get(), path);
    if (magic != "svmovr1") {
        throw DataError(path + ": not a one-vs-all model file (got '" + magic +
                        "')");
    }
    int num_classes = 0;
    if (std::fscanf(f.get(), "%d", &num_classes) != 1 || num_classes < 2) {
        throw DataError(path + ": malformed class count");
    }
    MulticlassModel model;
    model.num_classes = num_classes;
    for (int c = 0; c < num_classes; ++c) {
        const std::string block_magic = read_magic(f.get(), path);
        if (block_magic != "svmtxt1") {
            throw DataError(path + ": malformed model block");
        }
        model.per_class.push_back(read_binary_block(f.get(), path));
    }
    return model;
}

}  // namespace pnntrain
