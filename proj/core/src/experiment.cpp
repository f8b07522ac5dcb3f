#include "pnntrain/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include "pnntrain/errors.hpp"
#include "pnntrain/model_io.hpp"
#include "pnntrain/rng.hpp"

namespace pnntrain {

namespace {

namespace fs = std::filesystem;

// Seed streams of one trial; keeps the pool, the test draw and the
// split shuffle decoupled so changing one sample count never perturbs
// the others.
constexpr std::uint64_t kPoolStream = 1;
constexpr std::uint64_t kTestStream = 2;
constexpr std::uint64_t kSplitStream = 3;

struct ReferenceRow {
    const char* method;
    double error_percent;
};

// Published figures for methods outside this library's scope, shown in
// comparison tables for context only.
const ReferenceRow kTwoMoonsReference[] = {
    {"branch-and-bound", 0.0},
    {"help-training", 15.07},
};
const ReferenceRow kUspsReference[] = {
    {"tsvm-svmlight", 14.70},
    {"help-training", 7.77},
};

struct LoadedFiles {
    std::vector<Sample> train;
    std::vector<Sample> test;
};

int resolve_repeats(const RunSpec& spec) {
    if (spec.repeats < 0) throw ConfigError("repeats must be at least 1");
    if (spec.repeats > 0) return spec.repeats;
    return spec.kind == ExperimentKind::two_moons ? 20 : 1;
}

std::string default_tag(const RunSpec& spec) {
    return experiment_kind_name(spec.kind) + "-" + method_name(spec.method);
}

LoadedFiles load_files(const RunSpec& spec) {
    LoadedFiles files;
    if (spec.kind == ExperimentKind::two_moons) return files;

    std::string train = spec.train_path;
    std::string test = spec.test_path;
    if (spec.kind == ExperimentKind::usps) {
        if (train.empty()) train = "usps";
        if (test.empty()) test = "usps.t";
        const UspsData data =
            load_usps(resolve_data_path(train), resolve_data_path(test));
        files.train = data.train;
        files.test = data.test;
        return files;
    }
    if (train.empty()) {
        throw ConfigError("custom-file experiment needs a training file");
    }
    files.train = load_samples(resolve_data_path(train));
    if (!test.empty()) files.test = load_samples(resolve_data_path(test));
    return files;
}

SplitDataset build_split(const RunSpec& spec, const LoadedFiles& files,
                         std::uint64_t trial_seed) {
    const LabeledRequest request =
        spec.labeled_fraction > 0.0
            ? LabeledRequest::fraction(spec.labeled_fraction)
            : LabeledRequest::per_class(spec.labeled_per_class);

    if (spec.kind == ExperimentKind::two_moons) {
        std::vector<Sample> pool = generate_two_moons(
            spec.n_per_class, spec.noise_std,
            derive_seed(trial_seed, kPoolStream));
        std::vector<Sample> test = generate_two_moons(
            spec.test_per_class, spec.noise_std,
            derive_seed(trial_seed, kTestStream));
        return split_semi_supervised(pool, request,
                                     derive_seed(trial_seed, kSplitStream),
                                     std::move(test));
    }
    return split_semi_supervised(files.train, request,
                                 derive_seed(trial_seed, kSplitStream),
                                 files.test);
}

PipelineConfig make_config(const RunSpec& spec, const SplitDataset& split) {
    PipelineConfig config;
    config.sigma = spec.sigma;
    config.kernel.family = spec.kernel_family;
    config.kernel.gamma =
        spec.gamma > 0.0 ? spec.gamma : 1.0 / static_cast<double>(split.dim());
    config.c = spec.c;
    config.tol = spec.tol;
    config.max_iter = spec.max_iter;
    config.cache_bytes = spec.cache_bytes;
    config.strict = spec.strict;
    config.self_fraction = spec.self_fraction;
    config.self_max_rounds = spec.self_max_rounds;
    return config;
}

PipelineOutcome dispatch(Method method, const SplitDataset& split,
                         const PipelineConfig& config) {
    switch (method) {
        case Method::pnn_training:
            return pnn_training_pipeline(split, config);
        case Method::self_training:
            return self_training_pipeline(split, config);
        case Method::supervised:
            return supervised_svm_baseline(split, config);
    }
    throw ConfigError("unknown method");
}

PipelineOutcome run_trial(const RunSpec& spec, const LoadedFiles& files,
                          std::uint64_t trial_seed) {
    const SplitDataset split = build_split(spec, files, trial_seed);
    PipelineConfig config = make_config(spec, split);
    if (!spec.sigma_grid.empty()) {
        config.sigma = select_sigma_loo(split.labeled(), spec.sigma_grid,
                                        split.num_classes());
    }
    PipelineOutcome outcome = dispatch(spec.method, split, config);
    outcome.report.seed = trial_seed;
    return outcome;
}

void save_first_model(const SvmClassifier& classifier,
                      const std::string& path) {
    if (classifier.is_binary()) {
        save_binary_model(classifier.binary_model(), path);
    } else {
        save_multiclass_model(classifier.multiclass_model(), path);
    }
}

std::string table_header(ExperimentKind kind, std::uint64_t seed,
                         int repeats) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%s comparison over %d trial(s), base seed %llu\n",
                  experiment_kind_name(kind).c_str(), repeats,
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::string format_compare_table(ExperimentKind kind, std::uint64_t seed,
                                 int repeats,
                                 const std::vector<MethodSummary>& summaries) {
    std::string out = table_header(kind, seed, repeats);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s %6s %8s %8s %8s %8s\n", "method",
                  "trials", "mean%", "std", "min%", "max%");
    out += buf;
    for (const auto& s : summaries) {
        std::snprintf(buf, sizeof buf, "%-24s %6d %8.2f %8.2f %8.2f %8.2f\n",
                      s.method.c_str(), s.trials, s.error_mean, s.error_std,
                      s.error_min, s.error_max);
        out += buf;
    }

    const ReferenceRow* rows = nullptr;
    std::size_t row_count = 0;
    if (kind == ExperimentKind::two_moons) {
        rows = kTwoMoonsReference;
        row_count = std::size(kTwoMoonsReference);
    } else if (kind == ExperimentKind::usps) {
        rows = kUspsReference;
        row_count = std::size(kUspsReference);
    }
    if (row_count > 0) {
        out += "reference results from prior published work (not recomputed):\n";
        for (std::size_t i = 0; i < row_count; ++i) {
            std::snprintf(buf, sizeof buf, "%-24s %6s %8.2f\n", rows[i].method,
                          "-", rows[i].error_percent);
            out += buf;
        }
    }
    return out;
}

void write_text_file(const std::string& text, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot write file: " + path);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "pnn-training") return Method::pnn_training;
    if (name == "self-training") return Method::self_training;
    if (name == "supervised") return Method::supervised;
    throw ConfigError("unknown method: " + name);
}

std::string method_name(Method method) {
    switch (method) {
        case Method::pnn_training:
            return "pnn-training";
        case Method::self_training:
            return "self-training";
        case Method::supervised:
            return "supervised";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "two-moons") return ExperimentKind::two_moons;
    if (name == "usps") return ExperimentKind::usps;
    if (name == "custom-file") return ExperimentKind::custom_file;
    throw ConfigError("unknown experiment: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::two_moons:
            return "two-moons";
        case ExperimentKind::usps:
            return "usps";
        case ExperimentKind::custom_file:
            return "custom-file";
    }
    return "unknown";
}

std::string resolve_data_path(const std::string& path) {
    if (path.empty() || fs::exists(path)) return path;
    const char* dir = std::getenv("PNNTRAIN_DATA_DIR");
    if (dir && *dir) {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    return path;
}

RunSummary run(const RunSpec& spec) {
    const int repeats = resolve_repeats(spec);
    const LoadedFiles files = load_files(spec);
    const bool keep_first = spec.write_plot || !spec.model_path.empty();

    RunSummary summary;
    std::optional<SplitDataset> first_split;
    std::optional<PipelineOutcome> first_outcome;
    for (int t = 0; t < repeats; ++t) {
        const std::uint64_t trial_seed = spec.seed + static_cast<unsigned>(t);
        PipelineOutcome outcome = run_trial(spec, files, trial_seed);
        summary.reports.push_back(outcome.report);
        if (t == 0 && keep_first) {
            first_split.emplace(build_split(spec, files, trial_seed));
            first_outcome.emplace(std::move(outcome));
        }
    }
    summary.aggregate = summarize_reports(summary.reports).front();

    if (!spec.out_dir.empty()) {
        fs::create_directories(spec.out_dir);
        const std::string tag = spec.tag.empty() ? default_tag(spec) : spec.tag;
        const std::string prefix = (fs::path(spec.out_dir) / tag).string();
        write_report_file(summary.reports, prefix + "-report.txt");
        write_runs_csv(summary.reports, prefix + "-runs.csv");
        write_summary_csv({summary.aggregate}, prefix + "-summary.csv");
        if (spec.write_plot) {
            if (first_split->dim() != 2) {
                throw ConfigError("plot output needs 2-d features");
            }
            write_plot_csv(*first_split, first_outcome->classifier,
                           first_outcome->pseudo_labels, prefix + "-plot.csv");
        }
    } else if (spec.write_plot) {
        throw ConfigError("plot output needs an output directory");
    }

    if (!spec.model_path.empty()) {
        save_first_model(first_outcome->classifier, spec.model_path);
    }
    return summary;
}

CompareResult compare(const std::vector<RunSpec>& specs) {
    if (specs.empty()) throw ConfigError("compare: no runs given");
    const RunSpec& base = specs.front();
    const int repeats = resolve_repeats(base);
    for (const auto& s : specs) {
        const bool same_data =
            s.kind == base.kind && s.seed == base.seed &&
            resolve_repeats(s) == repeats &&
            s.n_per_class == base.n_per_class &&
            s.noise_std == base.noise_std &&
            s.test_per_class == base.test_per_class &&
            s.labeled_per_class == base.labeled_per_class &&
            s.labeled_fraction == base.labeled_fraction &&
            s.train_path == base.train_path && s.test_path == base.test_path;
        if (!same_data) {
            throw ConfigError(
                "compare: all runs must share dataset, seed, and repeats");
        }
    }

    const LoadedFiles files = load_files(base);
    CompareResult out;
    for (int t = 0; t < repeats; ++t) {
        const std::uint64_t trial_seed = base.seed + static_cast<unsigned>(t);
        // One split per trial, shared by every method: the comparison is
        // paired sample for sample.
        const SplitDataset split = build_split(base, files, trial_seed);
        for (const auto& spec : specs) {
            PipelineConfig config = make_config(spec, split);
            if (!spec.sigma_grid.empty()) {
                config.sigma = select_sigma_loo(
                    split.labeled(), spec.sigma_grid, split.num_classes());
            }
            PipelineOutcome outcome = dispatch(spec.method, split, config);
            outcome.report.seed = trial_seed;
            if (!spec.tag.empty()) outcome.report.method = spec.tag;
            out.reports.push_back(std::move(outcome.report));
        }
    }
    out.summaries = summarize_reports(out.reports);
    out.table = format_compare_table(base.kind, base.seed, repeats,
                                     out.summaries);

    if (!base.out_dir.empty()) {
        fs::create_directories(base.out_dir);
        const std::string prefix =
            (fs::path(base.out_dir) /
             (experiment_kind_name(base.kind) + "-compare"))
                .string();
        write_text_file(out.table, prefix + "-table.txt");
        write_runs_csv(out.reports, prefix + "-runs.csv");
        write_summary_csv(out.summaries, prefix + "-summary.csv");
    }
    return out;
}

void write_plot_csv(const SplitDataset& split, const SvmClassifier& classifier,
                    const std::vector<int>& pseudo_labels,
                    const std::string& path) {
    if (split.dim() != 2) {
        throw ConfigError("plot data needs 2-d features");
    }
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot write file: " + path);
    std::fprintf(f, "x,y,true_label,pseudo_label,split,decision_value\n");

    const auto decision = [&](const std::vector<double>& p) {
        return classifier.is_binary() ? classifier.binary_decision(p)
                                      : classifier.confidence(p);
    };
    const auto emit = [&](const std::vector<double>& p, int truth, int pseudo,
                          const char* part) {
        std::fprintf(f, "%.9g,%.9g,%d,%d,%s,%.9g\n", p[0], p[1], truth, pseudo,
                     part, decision(p));
    };

    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    bool first = true;
    const auto extend = [&](const std::vector<double>& p) {
        if (first) {
            xlo = xhi = p[0];
            ylo = yhi = p[1];
            first = false;
            return;
        }
        xlo = std::min(xlo, p[0]);
        xhi = std::max(xhi, p[0]);
        ylo = std::min(ylo, p[1]);
        yhi = std::max(yhi, p[1]);
    };
    for (const auto& s : split.labeled()) extend(s.features);
    for (const auto& s : split.unlabeled()) extend(s.features);
    for (const auto& s : split.test()) extend(s.features);

    for (const auto& s : split.labeled()) {
        emit(s.features, *s.label, -1, "labeled");
    }
    for (std::size_t i = 0; i < split.unlabeled().size(); ++i) {
        const int pseudo =
            i < pseudo_labels.size() ? pseudo_labels[i] : -1;
        emit(split.unlabeled()[i].features, split.audit_unlabeled_truth()[i],
             pseudo, "unlabeled");
    }
    for (const auto& s : split.test()) {
        emit(s.features, *s.label, -1, "test");
    }

    const double xpad = (xhi - xlo) > 0.0 ? 0.1 * (xhi - xlo) : 0.5;
    const double ypad = (yhi - ylo) > 0.0 ? 0.1 * (yhi - ylo) : 0.5;
    xlo -= xpad;
    xhi += xpad;
    ylo -= ypad;
    yhi += ypad;
    constexpr int kGrid = 200;
    std::vector<double> p(2);
    for (int iy = 0; iy < kGrid; ++iy) {
        for (int ix = 0; ix < kGrid; ++ix) {
            p[0] = xlo + (xhi - xlo) * ix / (kGrid - 1);
            p[1] = ylo + (yhi - ylo) * iy / (kGrid - 1);
            emit(p, -1, -1, "grid");
        }
    }
    std::fclose(f);
}

}  // namespace pnntrain
