// Experiment runner: seeded semi-supervised classification trials on
// generated or file-based datasets, with report/CSV/plot-data output.

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pnntrain/errors.hpp"
#include "pnntrain/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNoConvergence = 4;

struct CliOptions {
    pnntrain::RunSpec spec;
    std::string method = "pnn-training";
    std::string kernel = "rbf";
    std::vector<std::string> methods;  // compare only
    double cache_mb = 512.0;
    std::string spec_path;
};

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// CLI11 does not process config files attached to subcommands, so spec
// files are applied by hand: each key maps to the like-named long
// option, and keys whose option already appeared on the command line
// are skipped.
void apply_spec_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pnntrain::ConfigError("spec file not found: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string entry = trimmed(line);
        if (entry.empty() || entry[0] == '#' || entry[0] == ';') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw pnntrain::ConfigError(path + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        }
        std::string key = trimmed(entry.substr(0, eq));
        std::string value = trimmed(entry.substr(eq + 1));
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "spec") {
            throw pnntrain::ConfigError(path + ":" + std::to_string(line_no) +
                                        ": unknown option '" + key + "'");
        }
        if (opt->count() > 0) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw pnntrain::ConfigError(path + ": " + key + ": " + e.what());
        }
    }
}

void add_model_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("--sigma", o.spec.sigma,
                    "Parzen window width for the pseudo-labeler")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--sigma-grid", o.spec.sigma_grid,
                    "Comma-separated widths; picks one per trial by "
                    "labeled-set leave-one-out")
        ->delimiter(',');
    sub->add_option("--kernel", o.kernel, "SVM kernel: rbf or linear")
        ->check(CLI::IsMember({"rbf", "linear"}))
        ->capture_default_str();
    sub->add_option("--gamma", o.spec.gamma,
                    "RBF width; 0 means 1/(feature count)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--c", o.spec.c, "Soft-margin box constant")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol", o.spec.tol, "Solver KKT gap tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iter", o.spec.max_iter,
                    "Solver iteration cap; 0 means 10*n*classes");
    sub->add_option("--cache-mb", o.cache_mb, "Kernel cache budget in MiB")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--strict", o.spec.strict,
                  "Fail (exit 4) if any solve hits its iteration cap");
    sub->add_option("--self-fraction", o.spec.self_fraction,
                    "Self-training: share of the remaining pool labeled "
                    "per round")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-rounds", o.spec.self_max_rounds,
                    "Self-training round cap")
        ->capture_default_str();
}

void add_run_options(CLI::App* sub, CliOptions& o, bool single_run = true) {
    sub->add_option("--seed", o.spec.seed, "Base seed; trial t uses seed+t")
        ->capture_default_str();
    sub->add_option("--repeats", o.spec.repeats,
                    "Trial count; 0 means the experiment default "
                    "(20 for two-moons, 1 otherwise)");
    sub->add_option("--out-dir", o.spec.out_dir,
                    "Directory for report/CSV output");
    sub->add_option("--tag", o.spec.tag, "Output file prefix");
    if (single_run) {
        sub->add_flag("--plot", o.spec.write_plot,
                      "Also write a decision-map CSV for the first trial "
                      "(2-d data, needs --out-dir)");
        sub->add_option("--save-model", o.spec.model_path,
                        "Save the first trial's SVM model to this file");
    }
    sub->add_option("--spec", o.spec_path,
                    "key=value file with these options; flags win");
}

void add_moons_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("--n-per-class", o.spec.n_per_class,
                    "Training pool size per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--noise", o.spec.noise_std,
                    "Gaussian noise standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--test-per-class", o.spec.test_per_class,
                    "Held-out test draw per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_split_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("--labeled-per-class", o.spec.labeled_per_class,
                    "Labeled samples kept per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--labeled-fraction", o.spec.labeled_fraction,
                    "Labeled share of the pool (overrides per-class count)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void add_file_options(CLI::App* sub, CliOptions& o, bool train_required) {
    auto* train = sub->add_option(
        "--train", o.spec.train_path,
        "Training file (dense or sparse text, .gz accepted); relative "
        "paths also try $PNNTRAIN_DATA_DIR");
    if (train_required) train->required();
    sub->add_option("--test", o.spec.test_path, "Held-out test file");
}

void add_method_positional(CLI::App* sub, CliOptions& o) {
    sub->add_option("method", o.method,
                    "pnn-training, self-training or supervised")
        ->required()
        ->check(CLI::IsMember(
            {"pnn-training", "self-training", "supervised"}));
}

void finish_spec(CliOptions& o, const CLI::App* sub) {
    o.spec.method = pnntrain::parse_method(o.method);
    o.spec.kernel_family = pnntrain::parse_kernel_family(o.kernel);
    o.spec.cache_bytes =
        static_cast<std::size_t>(o.cache_mb * 1024.0) * 1024;
    // An explicit per-class count turns fraction mode off unless the
    // fraction was also given explicitly.
    if (sub->count("--labeled-per-class") > 0 &&
        sub->count("--labeled-fraction") == 0) {
        o.spec.labeled_fraction = 0.0;
    }
}

void print_summary(const pnntrain::RunSummary& summary,
                   const pnntrain::RunSpec& spec) {
    if (summary.reports.size() == 1) {
        std::fputs(pnntrain::format_report(summary.reports.front()).c_str(),
                   stdout);
    }
    const auto& a = summary.aggregate;
    std::printf("%s on %s: %d trial(s), mean error %.2f%% (std %.2f, min "
                "%.2f, max %.2f)\n",
                a.method.c_str(),
                pnntrain::experiment_kind_name(spec.kind).c_str(), a.trials,
                a.error_mean, a.error_std, a.error_min, a.error_max);
    if (!spec.out_dir.empty()) {
        std::printf("output written under %s\n", spec.out_dir.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-supervised SVM training experiments: a Parzen "
                 "network pseudo-labels the unlabeled pool, a kernel SVM "
                 "learns from the result"};
    app.require_subcommand(1);

    CliOptions moons, usps, custom, cmp;
    usps.spec.kind = pnntrain::ExperimentKind::usps;
    usps.spec.labeled_fraction = 0.1;
    custom.spec.kind = pnntrain::ExperimentKind::custom_file;

    CLI::App* sub_moons = app.add_subcommand(
        "two-moons", "Interleaving half circles, generated per trial");
    add_method_positional(sub_moons, moons);
    add_moons_options(sub_moons, moons);
    add_split_options(sub_moons, moons);
    add_model_options(sub_moons, moons);
    add_run_options(sub_moons, moons);

    CLI::App* sub_usps = app.add_subcommand(
        "usps", "Handwritten digits from a train/test file pair "
                "(features rescaled to [-1,1] by the training range)");
    add_method_positional(sub_usps, usps);
    add_file_options(sub_usps, usps, false);
    add_split_options(sub_usps, usps);
    add_model_options(sub_usps, usps);
    add_run_options(sub_usps, usps);

    CLI::App* sub_custom = app.add_subcommand(
        "custom-file", "Any labeled dataset file, used as-is");
    add_method_positional(sub_custom, custom);
    add_file_options(sub_custom, custom, true);
    add_split_options(sub_custom, custom);
    add_model_options(sub_custom, custom);
    add_run_options(sub_custom, custom);

    CLI::App* sub_cmp = app.add_subcommand(
        "compare", "Run several methods on identical splits and tabulate");
    std::string cmp_kind = "two-moons";
    sub_cmp->add_option("experiment", cmp_kind, "two-moons, usps or custom-file")
        ->required()
        ->check(CLI::IsMember({"two-moons", "usps", "custom-file"}));
    sub_cmp->add_option("--methods", cmp.methods,
                        "Comma-separated methods to compare")
        ->delimiter(',')
        ->default_val(std::vector<std::string>{
            "pnn-training", "self-training", "supervised"});
    add_moons_options(sub_cmp, cmp);
    add_file_options(sub_cmp, cmp, false);
    add_split_options(sub_cmp, cmp);
    add_model_options(sub_cmp, cmp);
    add_run_options(sub_cmp, cmp, /*single_run=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        const std::pair<CLI::App*, CliOptions*> parsed_tabs[] = {
            {sub_moons, &moons},
            {sub_usps, &usps},
            {sub_custom, &custom},
            {sub_cmp, &cmp},
        };
        for (const auto& [sub, options] : parsed_tabs) {
            if (sub->parsed() && !options->spec_path.empty()) {
                apply_spec_file(sub, options->spec_path);
            }
        }
        if (sub_moons->parsed()) {
            finish_spec(moons, sub_moons);
            print_summary(pnntrain::run(moons.spec), moons.spec);
        } else if (sub_usps->parsed()) {
            finish_spec(usps, sub_usps);
            print_summary(pnntrain::run(usps.spec), usps.spec);
        } else if (sub_custom->parsed()) {
            finish_spec(custom, sub_custom);
            print_summary(pnntrain::run(custom.spec), custom.spec);
        } else if (sub_cmp->parsed()) {
            cmp.spec.kind = pnntrain::parse_experiment_kind(cmp_kind);
            if (cmp.spec.kind == pnntrain::ExperimentKind::usps &&
                sub_cmp->count("--labeled-fraction") == 0 &&
                sub_cmp->count("--labeled-per-class") == 0) {
                cmp.spec.labeled_fraction = 0.1;
            }
            cmp.method = "pnn-training";  // placeholder, overridden below
            finish_spec(cmp, sub_cmp);
            std::vector<pnntrain::RunSpec> specs;
            for (const auto& m : cmp.methods) {
                pnntrain::RunSpec spec = cmp.spec;
                spec.method = pnntrain::parse_method(m);
                spec.tag.clear();
                specs.push_back(spec);
            }
            const pnntrain::CompareResult result = pnntrain::compare(specs);
            std::fputs(result.table.c_str(), stdout);
            if (!cmp.spec.out_dir.empty()) {
                std::printf("output written under %s\n",
                            cmp.spec.out_dir.c_str());
            }
        }
    } catch (const pnntrain::ConvergenceError& e) {
        std::fprintf(stderr, "error: %s (kkt gap %.6g after %ld iterations)\n",
                     e.what(), e.kkt_gap, e.iterations);
        return kExitNoConvergence;
    } catch (const pnntrain::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadArgs;
    } catch (const pnntrain::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
