#include "pnntrain/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pnntrain/errors.hpp"

namespace pnntrain {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_strict(const PipelineConfig& config, const SolverSummary& solver) {
    if (config.strict && !solver.all_converged) {
        throw ConvergenceError(
            "dual solver hit its iteration cap before reaching tol",
            solver.max_kkt_gap, solver.total_iterations);
    }
}

ExperimentReport base_report(const std::string& method,
                             const SplitDataset& split,
                             const PipelineConfig& config) {
    ExperimentReport r;
    r.method = method;
    r.n_labeled = split.labeled().size();
    r.n_unlabeled = split.unlabeled().size();
    r.n_test = split.test().size();
    r.num_classes = split.num_classes();
    r.dim = split.dim();
    r.sigma = config.sigma;
    r.kernel = kernel_family_name(config.kernel.family);
    r.gamma = config.kernel.gamma;
    r.c = config.c;
    r.tol = config.tol;
    r.pseudo_label_accuracy = kNaN;
    r.confidence_mean = kNaN;
    r.confidence_min = kNaN;
    r.confidence_max = kNaN;
    return r;
}

void fill_confidence(ExperimentReport& r, const std::vector<double>& conf) {
    if (conf.empty()) return;
    r.confidence_mean =
        std::accumulate(conf.begin(), conf.end(), 0.0) /
        static_cast<double>(conf.size());
    r.confidence_min = *std::min_element(conf.begin(), conf.end());
    r.confidence_max = *std::max_element(conf.begin(), conf.end());
}

// Share of assigned pool labels that match the held ground truth.
// Diagnostic only; the truth never reaches any training path.
void fill_pseudo_accuracy(ExperimentReport& r, const SplitDataset& split,
                          const std::vector<int>& pseudo_labels) {
    const std::vector<int>& truth = split.audit_unlabeled_truth();
    std::size_t assigned = 0, correct = 0;
    for (std::size_t i = 0; i < pseudo_labels.size(); ++i) {
        if (pseudo_labels[i] < 0) continue;
        ++assigned;
        if (pseudo_labels[i] == truth[i]) ++correct;
    }
    r.n_pseudo_labeled = assigned;
    if (assigned > 0) {
        r.pseudo_label_accuracy =
            static_cast<double>(correct) / static_cast<double>(assigned);
    }
}

void run_test_eval(ExperimentReport& r, const SvmClassifier& classifier,
                   const SplitDataset& split) {
    const int k = split.num_classes();
    if (split.test().empty()) {
        r.test_error_percent = kNaN;
        r.confusion.num_classes = k;
        r.confusion.counts.assign(
            static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
        return;
    }
    std::vector<int> predictions;
    predictions.reserve(split.test().size());
    for (const auto& s : split.test()) {
        predictions.push_back(classifier.predict(s.features));
    }
    const EvalResult eval = evaluate(predictions, split.test(), k);
    r.test_error_percent = eval.error_percent;
    r.confusion = eval.confusion;
}

}  // namespace

EvalResult evaluate(const std::vector<int>& predictions,
                    const std::vector<Sample>& test, int num_classes) {
    if (test.empty()) throw DataError("evaluate: empty test set");
    if (predictions.size() != test.size()) {
        throw DataError("evaluate: prediction count mismatch");
    }
    EvalResult out;
    out.confusion.num_classes = num_classes;
    out.confusion.counts.assign(
        static_cast<std::size_t>(num_classes) *
            static_cast<std::size_t>(num_classes),
        0);
    long wrong = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        if (!test[i].label) throw DataError("evaluate: unlabeled test sample");
        const int truth = *test[i].label;
        const int pred = predictions[i];
        if (truth < 0 || truth >= num_classes || pred < 0 ||
            pred >= num_classes) {
            throw DataError("evaluate: class id outside range");
        }
        out.confusion.at(truth, pred) += 1;
        if (pred != truth) ++wrong;
    }
    out.error_percent =
        100.0 * static_cast<double>(wrong) / static_cast<double>(test.size());
    return out;
}

SvmClassifier SvmClassifier::train(const std::vector<Sample>& labeled,
                                   int num_classes,
                                   const PipelineConfig& config,
                                   std::vector<SolveStats>* stats_out) {
    if (num_classes < 2) {
        throw ConfigError("classifier needs at least two classes");
    }
    const FeatureMatrix x = FeatureMatrix::from_samples(labeled);
    std::vector<int> labels;
    labels.reserve(labeled.size());
    for (const auto& s : labeled) {
        if (!s.label) throw DataError("classifier: unlabeled training sample");
        labels.push_back(*s.label);
    }

    SolveOptions opts;
    opts.c = config.c;
    opts.tol = config.tol;
    opts.max_iter = config.max_iter;
    opts.num_classes_hint = num_classes;
    opts.cache_bytes = config.cache_bytes;

    SvmClassifier out;
    out.num_classes_ = num_classes;
    if (num_classes == 2) {
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            y[i] = labels[i] == 1 ? +1 : -1;
        }
        SolveResult sr = solve_dual(x, y, config.kernel, opts);
        if (stats_out) stats_out->push_back(sr.stats);
        out.binary_ = std::move(sr.model);
    } else {
        MulticlassResult mr =
            train_one_vs_all(x, labels, num_classes, config.kernel, opts);
        if (stats_out) {
            stats_out->insert(stats_out->end(), mr.stats.begin(),
                              mr.stats.end());
        }
        out.multi_ = std::move(mr.model);
    }
    return out;
}

int SvmClassifier::predict(const std::vector<double>& x) const {
    if (binary_) return decision_value(*binary_, x) >= 0.0 ? 1 : 0;
    return predict_multiclass(*multi_, x);
}

double SvmClassifier::confidence(const std::vector<double>& x) const {
    if (binary_) return std::fabs(decision_value(*binary_, x));
    const std::vector<double> d = decision_values(*multi_, x);
    return *std::max_element(d.begin(), d.end());
}

double SvmClassifier::binary_decision(const std::vector<double>& x) const {
    if (!binary_) {
        throw std::logic_error("binary decision asked of a one-vs-all model");
    }
    return decision_value(*binary_, x);
}

SolverSummary summarize_solves(const std::vector<SolveStats>& stats) {
    SolverSummary s;
    for (const auto& st : stats) {
        s.total_iterations += st.iterations;
        s.max_kkt_gap = std::max(s.max_kkt_gap, st.kkt_gap);
        s.all_converged = s.all_converged && st.converged;
        s.total_support_vectors += st.support_vectors;
        ++s.solves;
    }
    return s;
}

PipelineOutcome pnn_training_pipeline(const SplitDataset& split,
                                      const PipelineConfig& config) {
    PipelineOutcome out;
    out.report = base_report("pnn-training", split, config);

    const PnnModel pnn =
        pnn_train(split.labeled(), config.sigma, split.num_classes());

    std::vector<Sample> augmented = split.labeled();
    augmented.reserve(split.labeled().size() + split.unlabeled().size());
    std::vector<double> winning_g;
    winning_g.reserve(split.unlabeled().size());
    out.pseudo_labels.assign(split.unlabeled().size(), -1);
    for (std::size_t i = 0; i < split.unlabeled().size(); ++i) {
        const Sample& u = split.unlabeled()[i];
        const CategoryScores scores = pnn_classify(pnn, u.features);
        out.pseudo_labels[i] = scores.predicted;
        winning_g.push_back(
            scores.g[static_cast<std::size_t>(scores.predicted)]);
        augmented.push_back(Sample{u.features, scores.predicted});
    }

    std::vector<SolveStats> stats;
    out.classifier =
        SvmClassifier::train(augmented, split.num_classes(), config, &stats);
    out.report.solver = summarize_solves(stats);
    check_strict(config, out.report.solver);

    run_test_eval(out.report, out.classifier, split);
    fill_pseudo_accuracy(out.report, split, out.pseudo_labels);
    fill_confidence(out.report, winning_g);
    out.training_set = std::move(augmented);
    return out;
}

PipelineOutcome self_training_pipeline(const SplitDataset& split,
                                       const PipelineConfig& config) {
    if (!(config.self_fraction > 0.0) || config.self_fraction > 1.0) {
        throw ConfigError("self-training fraction must be in (0, 1]");
    }
    if (config.self_max_rounds < 0) {
        throw ConfigError("self-training round cap must be non-negative");
    }

    PipelineOutcome out;
    out.report = base_report("self-training", split, config);
    out.pseudo_labels.assign(split.unlabeled().size(), -1);

    std::vector<Sample> labeled_now = split.labeled();
    std::vector<std::size_t> remaining(split.unlabeled().size());
    std::iota(remaining.begin(), remaining.end(), 0);

    std::vector<SolveStats> stats;
    std::vector<double> move_confidence;
    int rounds = 0;
    while (!remaining.empty() && rounds < config.self_max_rounds) {
        const SvmClassifier classifier = SvmClassifier::train(
            labeled_now, split.num_classes(), config, &stats);

        struct Scored {
            std::size_t pool_index;
            int predicted;
            double confidence;
        };
        std::vector<Scored> scored;
        scored.reserve(remaining.size());
        for (std::size_t idx : remaining) {
            const Sample& u = split.unlabeled()[idx];
            scored.push_back(Scored{idx, classifier.predict(u.features),
                                    classifier.confidence(u.features)});
        }
        // Ties keep pool order so the round is fully deterministic.
        std::stable_sort(scored.begin(), scored.end(),
                         [](const Scored& a, const Scored& b) {
                             return a.confidence > b.confidence;
                         });

        const std::size_t quota = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   config.self_fraction *
                   static_cast<double>(remaining.size())));
        const std::size_t moved = std::min(quota, scored.size());
        std::vector<bool> taken(split.unlabeled().size(), false);
        for (std::size_t k = 0; k < moved; ++k) {
            const Scored& s = scored[k];
            out.pseudo_labels[s.pool_index] = s.predicted;
            labeled_now.push_back(
                Sample{split.unlabeled()[s.pool_index].features, s.predicted});
            move_confidence.push_back(s.confidence);
            taken[s.pool_index] = true;
        }
        std::erase_if(remaining,
                      [&](std::size_t idx) { return taken[idx]; });
        ++rounds;
    }

    out.classifier = SvmClassifier::train(labeled_now, split.num_classes(),
                                          config, &stats);
    out.report.solver = summarize_solves(stats);
    check_strict(config, out.report.solver);

    run_test_eval(out.report, out.classifier, split);
    fill_pseudo_accuracy(out.report, split, out.pseudo_labels);
    fill_confidence(out.report, move_confidence);
    out.training_set = std::move(labeled_now);
    return out;
}

PipelineOutcome supervised_svm_baseline(const SplitDataset& split,
                                        const PipelineConfig& config) {
    PipelineOutcome out;
    out.report = base_report("supervised", split, config);
    out.pseudo_labels.assign(split.unlabeled().size(), -1);

    std::vector<SolveStats> stats;
    out.classifier = SvmClassifier::train(split.labeled(),
                                          split.num_classes(), config, &stats);
    out.report.solver = summarize_solves(stats);
    check_strict(config, out.report.solver);

    run_test_eval(out.report, out.classifier, split);
    out.report.n_pseudo_labeled = 0;
    out.training_set = split.labeled();
    return out;
}

double select_sigma_loo(const std::vector<Sample>& labeled,
                        const std::vector<double>& grid, int num_classes) {
    if (grid.empty()) throw ConfigError("sigma selection: empty grid");
    for (double s : grid) {
        if (!(s > 0.0)) throw ConfigError("sigma selection: widths must be positive");
    }
    const std::size_t m = labeled.size();
    if (m < 2) return grid.front();

    int max_label = 0;
    const std::size_t dim = labeled[0].features.size();
    for (const auto& s : labeled) {
        if (!s.label) throw DataError("sigma selection: unlabeled sample");
        max_label = std::max(max_label, *s.label);
    }
    if (num_classes == 0) num_classes = max_label + 1;

    // Pairwise cosine similarities once; each width only re-runs the
    // cheap activation sums.
    std::vector<std::vector<double>> pattern(m);
    for (std::size_t i = 0; i < m; ++i) {
        pattern[i] = normalize(labeled[i].features);
    }
    std::vector<double> z(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                dot += pattern[i][k] * pattern[j][k];
            }
            z[i * m + j] = dot;
            z[j * m + i] = dot;
        }
    }

    double best_sigma = grid.front();
    std::size_t best_errors = m + 1;
    for (double sigma : grid) {
        std::size_t errors = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> g(static_cast<std::size_t>(num_classes), 0.0);
            double zmax = -2.0;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i) continue;
                g[static_cast<std::size_t>(*labeled[j].label)] +=
                    pnn_activation(z[i * m + j], sigma);
                zmax = std::max(zmax, z[i * m + j]);
            }
            int predicted = 0;
            double best = -1.0;
            for (int c = 0; c < num_classes; ++c) {
                if (g[static_cast<std::size_t>(c)] > best) {
                    best = g[static_cast<std::size_t>(c)];
                    predicted = c;
                }
            }
            if (best == 0.0) {
                // Same underflow fallback as classification.
                std::vector<double> shifted(
                    static_cast<std::size_t>(num_classes), 0.0);
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    shifted[static_cast<std::size_t>(*labeled[j].label)] +=
                        std::exp((z[i * m + j] - zmax) / (sigma * sigma));
                }
                best = -1.0;
                for (int c = 0; c < num_classes; ++c) {
                    if (shifted[static_cast<std::size_t>(c)] > best) {
                        best = shifted[static_cast<std::size_t>(c)];
                        predicted = c;
                    }
                }
            }
            if (predicted != *labeled[i].label) ++errors;
        }
        if (errors < best_errors) {
            best_errors = errors;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

}  // namespace pnntrain
