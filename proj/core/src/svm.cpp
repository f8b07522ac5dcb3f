#include "pnntrain/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pnntrain/errors.hpp"

namespace pnntrain {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

KernelCache::KernelCache(const FeatureMatrix& x, const KernelSpec& spec,
                         std::size_t budget_bytes)
    : x_(x), spec_(spec) {
    const std::size_t n = x.rows;
    const std::size_t row_bytes = std::max<std::size_t>(1, n * sizeof(double));
    budget_rows_ = std::max<std::size_t>(2, budget_bytes / row_bytes);

    if (spec_.family == KernelFamily::rbf) {
        sqnorm_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x_.row(i);
            double ss = 0.0;
            for (std::size_t j = 0; j < x_.cols; ++j) ss += xi[j] * xi[j];
            sqnorm_[i] = ss;
        }
    }
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag_[i] = spec_.family == KernelFamily::rbf
                       ? 1.0
                       : kernel_eval(spec_, x_.row(i), x_.row(i), x_.cols);
    }
}

void KernelCache::compute_row(std::size_t i, std::vector<double>& out) const {
    const std::size_t n = x_.rows;
    out.resize(n);
    const double* xi = x_.row(i);
    if (spec_.family == KernelFamily::rbf) {
        // |xi - xt|^2 = |xi|^2 + |xt|^2 - 2 xi.xt
        for (std::size_t t = 0; t < n; ++t) {
            const double* xt = x_.row(t);
            double dot = 0.0;
            for (std::size_t j = 0; j < x_.cols; ++j) dot += xi[j] * xt[j];
            double d2 = sqnorm_[i] + sqnorm_[t] - 2.0 * dot;
            if (d2 < 0.0) d2 = 0.0;
            out[t] = std::exp(-spec_.gamma * d2);
        }
    } else {
        for (std::size_t t = 0; t < n; ++t) {
            const double* xt = x_.row(t);
            double dot = 0.0;
            for (std::size_t j = 0; j < x_.cols; ++j) dot += xi[j] * xt[j];
            out[t] = dot;
        }
    }
}

const double* KernelCache::fetch(std::size_t i, std::size_t keep_a,
                                 std::size_t keep_b) {
    auto it = entries_.find(i);
    if (it != entries_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.lru_pos);
        return it->second.values.data();
    }
    while (entries_.size() >= budget_rows_) {
        auto victim = std::prev(lru_.end());
        while (victim != lru_.begin() && (*victim == keep_a || *victim == keep_b)) {
            --victim;
        }
        if (*victim == keep_a || *victim == keep_b) break;
        entries_.erase(*victim);
        lru_.erase(victim);
    }
    lru_.push_front(i);
    Entry entry;
    entry.lru_pos = lru_.begin();
    compute_row(i, entry.values);
    auto [pos, inserted] = entries_.emplace(i, std::move(entry));
    return pos->second.values.data();
}

const double* KernelCache::row(std::size_t i) {
    return fetch(i, i, i);
}

std::pair<const double*, const double*> KernelCache::rows(std::size_t i,
                                                          std::size_t j) {
    fetch(i, i, j);
    const double* rj = fetch(j, i, j);
    const double* ri = entries_.find(i)->second.values.data();
    return {ri, rj};
}

namespace {

struct DualState {
    std::vector<double> alpha;
    std::vector<double> grad;  // grad_i = (Q alpha)_i - 1
};

double dual_min_value(const DualState& s) {
    // alpha'Q alpha / 2 - sum(alpha) folds to sum(alpha_i (grad_i - 1)) / 2.
    double v = 0.0;
    for (std::size_t i = 0; i < s.alpha.size(); ++i) {
        v += s.alpha[i] * (s.grad[i] - 1.0);
    }
    return 0.5 * v;
}

SolveResult solve_impl(KernelCache& cache, const FeatureMatrix& x,
                       const std::vector<int>& y, const KernelSpec& kernel,
                       const SolveOptions& opts) {
    const std::size_t n = cache.size();
    if (y.size() != n) throw DataError("dual solve: label count mismatch");
    if (!(opts.c > 0.0)) throw ConfigError("dual solve: C must be positive");
    if (!(opts.tol > 0.0)) throw ConfigError("dual solve: tol must be positive");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v == 1) pos = true;
        else if (v == -1) neg = true;
        else throw DataError("dual solve: labels must be +1 or -1");
    }
    if (!pos || !neg) {
        throw DataError("dual solve: both classes must be present");
    }

    const double c = opts.c;
    long max_iter = opts.max_iter;
    if (max_iter <= 0) {
        max_iter = 10 * static_cast<long>(n) *
                   std::max(2, opts.num_classes_hint);
    }

    DualState s;
    s.alpha.assign(n, 0.0);
    s.grad.assign(n, -1.0);

    SolveStats stats;
    double audit_value = 0.0;
    bool audit_primed = false;

    while (true) {
        // Maximal violating pair: the steepest feasible ascent direction
        // among coordinates free to move up, against the steepest among
        // those free to move down.
        double up_best = -kInf, low_best = kInf;
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * s.grad[t];
            const bool in_up = (y[t] == 1) ? s.alpha[t] < c : s.alpha[t] > 0.0;
            const bool in_low = (y[t] == 1) ? s.alpha[t] > 0.0 : s.alpha[t] < c;
            if (in_up && v > up_best) {
                up_best = v;
                i = static_cast<std::ptrdiff_t>(t);
            }
            if (in_low && v < low_best) {
                low_best = v;
                j = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i < 0 || j < 0) {
            stats.kkt_gap = 0.0;
            stats.converged = true;
            break;
        }
        stats.kkt_gap = up_best - low_best;
        if (stats.kkt_gap < opts.tol) {
            stats.converged = true;
            break;
        }
        if (stats.iterations >= max_iter) {
            stats.converged = false;
            break;
        }

        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        const auto [ki, kj] = cache.rows(ui, uj);

        const double old_ai = s.alpha[ui];
        const double old_aj = s.alpha[uj];
        double quad = cache.diag(ui) + cache.diag(uj) - 2.0 * ki[uj];
        if (quad <= 0.0) quad = kTau;

        if (y[ui] != y[uj]) {
            const double delta = (-s.grad[ui] - s.grad[uj]) / quad;
            const double diff = old_ai - old_aj;
            s.alpha[ui] += delta;
            s.alpha[uj] += delta;
            if (diff > 0.0) {
                if (s.alpha[uj] < 0.0) {
                    s.alpha[uj] = 0.0;
                    s.alpha[ui] = diff;
                }
            } else {
                if (s.alpha[ui] < 0.0) {
                    s.alpha[ui] = 0.0;
                    s.alpha[uj] = -diff;
                }
            }
            if (diff > 0.0) {
                if (s.alpha[ui] > c) {
                    s.alpha[ui] = c;
                    s.alpha[uj] = c - diff;
                }
            } else {
                if (s.alpha[uj] > c) {
                    s.alpha[uj] = c;
                    s.alpha[ui] = c + diff;
                }
            }
        } else {
            const double delta = (s.grad[ui] - s.grad[uj]) / quad;
            const double sum = old_ai + old_aj;
            s.alpha[ui] -= delta;
            s.alpha[uj] += delta;
            if (sum > c) {
                if (s.alpha[ui] > c) {
                    s.alpha[ui] = c;
                    s.alpha[uj] = sum - c;
                }
            } else {
                if (s.alpha[uj] < 0.0) {
                    s.alpha[uj] = 0.0;
                    s.alpha[ui] = sum;
                }
            }
            if (sum > c) {
                if (s.alpha[uj] > c) {
                    s.alpha[uj] = c;
                    s.alpha[ui] = sum - c;
                }
            } else {
                if (s.alpha[ui] < 0.0) {
                    s.alpha[ui] = 0.0;
                    s.alpha[uj] = sum;
                }
            }
        }

        const double dai = s.alpha[ui] - old_ai;
        const double daj = s.alpha[uj] - old_aj;
        for (std::size_t t = 0; t < n; ++t) {
            s.grad[t] += y[ui] * y[t] * ki[t] * dai + y[uj] * y[t] * kj[t] * daj;
        }
        ++stats.iterations;

        if (opts.verify_ascent && stats.iterations % 16 == 0) {
            const double v = dual_min_value(s);
            if (audit_primed && v > audit_value + 1e-9 * (1.0 + std::fabs(audit_value))) {
                throw std::logic_error("dual objective worsened during solve");
            }
            audit_value = v;
            audit_primed = true;
        }
    }

    // Offset from the KKT stationarity conditions: free multipliers pin
    // y_i f(x_i) = 1 exactly, so average them; with none free the offset
    // is only boxed, take the midpoint.
    double ub = kInf, lb = -kInf, free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * s.grad[t];
        if (s.alpha[t] >= c) {
            if (y[t] == 1) lb = std::max(lb, yg);
            else ub = std::min(ub, yg);
        } else if (s.alpha[t] <= 0.0) {
            if (y[t] == -1) lb = std::max(lb, yg);
            else ub = std::min(ub, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho =
        free_count > 0 ? free_sum / static_cast<double>(free_count)
                       : (ub + lb) / 2.0;

    SolveResult result;
    result.model.bias = -rho;
    result.model.kernel = kernel;
    result.model.c = c;
    result.model.support_vectors.cols = x.cols;
    for (std::size_t t = 0; t < n; ++t) {
        if (s.alpha[t] > 0.0) {
            result.model.support_vectors.append_row(x.row(t));
            result.model.sv_coeffs.push_back(s.alpha[t] * y[t]);
        }
    }
    stats.dual_objective = -dual_min_value(s);
    stats.support_vectors = result.model.sv_coeffs.size();
    result.stats = stats;
    return result;
}

}  // namespace

SolveResult solve_dual(const FeatureMatrix& x, const std::vector<int>& y,
                       const KernelSpec& kernel, const SolveOptions& opts) {
    if (x.rows == 0) throw DataError("dual solve: empty training set");
    KernelCache cache(x, kernel, opts.cache_bytes);
    return solve_impl(cache, x, y, kernel, opts);
}

SolveResult solve_dual(KernelCache& cache, const FeatureMatrix& x,
                       const std::vector<int>& y, const KernelSpec& kernel,
                       const SolveOptions& opts) {
    if (cache.size() != x.rows) {
        throw DataError("dual solve: cache does not match the data");
    }
    return solve_impl(cache, x, y, kernel, opts);
}

double decision_value(const SvmBinaryModel& model, const double* x,
                      std::size_t dim) {
    if (dim != model.support_vectors.cols && model.support_vectors.rows > 0) {
        throw DataError("decision value: dimension mismatch");
    }
    double f = model.bias;
    for (std::size_t k = 0; k < model.support_vectors.rows; ++k) {
        f += model.sv_coeffs[k] *
             kernel_eval(model.kernel, model.support_vectors.row(k), x, dim);
    }
    return f;
}

MulticlassResult train_one_vs_all(const FeatureMatrix& x,
                                  const std::vector<int>& labels,
                                  int num_classes, const KernelSpec& kernel,
                                  const SolveOptions& opts) {
    if (num_classes < 2) {
        throw ConfigError("one-vs-all needs at least two classes");
    }
    if (labels.size() != x.rows) {
        throw DataError("one-vs-all: label count mismatch");
    }
    std::vector<std::size_t> class_count(static_cast<std::size_t>(num_classes),
                                         0);
    for (int l : labels) {
        if (l < 0 || l >= num_classes) {
            throw DataError("one-vs-all: label outside class range");
        }
        ++class_count[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (class_count[static_cast<std::size_t>(c)] == 0) {
            throw DataError("one-vs-all: class " + std::to_string(c) +
                            " has no samples");
        }
    }

    // All subproblems run over the same points, so one cache serves all.
    KernelCache cache(x, kernel, opts.cache_bytes);
    SolveOptions sub = opts;
    sub.num_classes_hint = num_classes;

    MulticlassResult result;
    result.model.num_classes = num_classes;
    result.model.per_class.reserve(static_cast<std::size_t>(num_classes));
    std::vector<int> y(labels.size());
    for (int c = 0; c < num_classes; ++c) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            y[i] = labels[i] == c ? +1 : -1;
        }
        SolveResult sr = solve_dual(cache, x, y, kernel, sub);
        result.model.per_class.push_back(std::move(sr.model));
        result.stats.push_back(sr.stats);
    }
    return result;
}

std::vector<double> decision_values(const MulticlassModel& model,
                                    const std::vector<double>& x) {
    std::vector<double> out;
    out.reserve(model.per_class.size());
    for (const auto& m : model.per_class) {
        out.push_back(decision_value(m, x));
    }
    return out;
}

int predict_multiclass(const MulticlassModel& model,
                       const std::vector<double>& x) {
    const std::vector<double> d = decision_values(model, x);
    int best = 0;
    for (int c = 1; c < static_cast<int>(d.size()); ++c) {
        if (d[static_cast<std::size_t>(c)] > d[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

}  // namespace pnntrain
