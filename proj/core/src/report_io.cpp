#include "pnntrain/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "pnntrain/errors.hpp"

namespace pnntrain {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_out(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f) throw DataError("cannot write file: " + path);
    return f;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string fmt_or_na(const char* format, double v) {
    return std::isnan(v) ? "n/a" : fmt(format, v);
}

std::string csv_num(double v) {
    return std::isnan(v) ? "nan" : fmt("%.6g", v);
}

}  // namespace

std::string format_report(const ExperimentReport& r) {
    std::string out;
    out += "method: " + r.method + "\n";
    out += "seed: " + std::to_string(r.seed) + "\n";
    out += "data: " + std::to_string(r.n_labeled) + " labeled / " +
           std::to_string(r.n_unlabeled) + " unlabeled / " +
           std::to_string(r.n_test) + " test, " +
           std::to_string(r.num_classes) + " classes, dim " +
           std::to_string(r.dim) + "\n";
    out += "config: sigma=" + fmt("%g", r.sigma) + " kernel=" + r.kernel +
           " gamma=" + fmt("%g", r.gamma) + " c=" + fmt("%g", r.c) +
           " tol=" + fmt("%g", r.tol) + "\n";

    if (std::isnan(r.test_error_percent)) {
        out += "test error: n/a (no test set)\n";
    } else {
        long total = 0, correct = 0;
        for (int t = 0; t < r.confusion.num_classes; ++t) {
            for (int p = 0; p < r.confusion.num_classes; ++p) {
                total += r.confusion.at(t, p);
                if (t == p) correct += r.confusion.at(t, p);
            }
        }
        out += "test error: " + fmt("%.2f", r.test_error_percent) + "% (" +
               std::to_string(total - correct) + "/" + std::to_string(total) +
               ")\n";
        out += "confusion (rows true, cols predicted):\n";
        for (int t = 0; t < r.confusion.num_classes; ++t) {
            out += " ";
            for (int p = 0; p < r.confusion.num_classes; ++p) {
                out += " " + std::to_string(r.confusion.at(t, p));
            }
            out += "\n";
        }
    }

    out += "pseudo labels: " + std::to_string(r.n_pseudo_labeled) +
           " assigned, accuracy " +
           fmt_or_na("%.4f", r.pseudo_label_accuracy) + "\n";
    out += "confidence: mean=" + fmt_or_na("%.6g", r.confidence_mean) +
           " min=" + fmt_or_na("%.6g", r.confidence_min) +
           " max=" + fmt_or_na("%.6g", r.confidence_max) + "\n";
    out += "solver: " + std::to_string(r.solver.solves) + " solves, " +
           std::to_string(r.solver.total_iterations) + " iterations, " +
           std::to_string(r.solver.total_support_vectors) +
           " support vectors, max kkt gap " +
           fmt("%.6g", r.solver.max_kkt_gap) + ", converged " +
           (r.solver.all_converged ? "yes" : "no") + "\n";
    return out;
}

void write_report_file(const std::vector<ExperimentReport>& reports,
                       const std::string& path) {
    FilePtr f = open_out(path);
    bool first = true;
    for (const auto& r : reports) {
        if (!first) std::fputc('\n', f.get());
        first = false;
        const std::string text = format_report(r);
        std::fwrite(text.data(), 1, text.size(), f.get());
    }
}

void write_runs_csv(const std::vector<ExperimentReport>& reports,
                    const std::string& path) {
    FilePtr f = open_out(path);
    std::fprintf(f.get(),
                 "method,seed,error_percent,n_labeled,n_unlabeled,n_test,"
                 "pseudo_label_accuracy,n_pseudo_labeled,sigma,kernel,gamma,c,"
                 "solver_iterations,solver_converged,support_vectors\n");
    for (const auto& r : reports) {
        std::fprintf(f.get(), "%s,%" PRIu64 ",%s,%zu,%zu,%zu,%s,%zu,%s,%s,%s,%s,%ld,%d,%zu\n",
                     r.method.c_str(), r.seed,
                     csv_num(r.test_error_percent).c_str(), r.n_labeled,
                     r.n_unlabeled, r.n_test,
                     csv_num(r.pseudo_label_accuracy).c_str(),
                     r.n_pseudo_labeled, csv_num(r.sigma).c_str(),
                     r.kernel.c_str(), csv_num(r.gamma).c_str(),
                     csv_num(r.c).c_str(), r.solver.total_iterations,
                     r.solver.all_converged ? 1 : 0,
                     r.solver.total_support_vectors);
    }
}

std::vector<MethodSummary> summarize_reports(
    const std::vector<ExperimentReport>& reports) {
    std::vector<MethodSummary> out;
    for (const auto& r : reports) {
        MethodSummary* s = nullptr;
        for (auto& existing : out) {
            if (existing.method == r.method) {
                s = &existing;
                break;
            }
        }
        if (!s) {
            out.push_back(MethodSummary{});
            s = &out.back();
            s->method = r.method;
            s->error_min = std::numeric_limits<double>::infinity();
            s->error_max = -std::numeric_limits<double>::infinity();
        }
        ++s->trials;
        s->error_mean += r.test_error_percent;
        s->error_min = std::min(s->error_min, r.test_error_percent);
        s->error_max = std::max(s->error_max, r.test_error_percent);
        s->pseudo_accuracy_mean += r.pseudo_label_accuracy;
    }
    for (auto& s : out) {
        s.error_mean /= s.trials;
        s.pseudo_accuracy_mean /= s.trials;
    }
    for (auto& s : out) {
        if (s.trials < 2) {
            s.error_std = 0.0;
            continue;
        }
        double ss = 0.0;
        for (const auto& r : reports) {
            if (r.method != s.method) continue;
            const double d = r.test_error_percent - s.error_mean;
            ss += d * d;
        }
        s.error_std = std::sqrt(ss / (s.trials - 1));
    }
    return out;
}

void write_summary_csv(const std::vector<MethodSummary>& summaries,
                       const std::string& path) {
    FilePtr f = open_out(path);
    std::fprintf(f.get(),
                 "method,trials,error_mean,error_std,error_min,error_max,"
                 "pseudo_accuracy_mean\n");
    for (const auto& s : summaries) {
        std::fprintf(f.get(), "%s,%d,%s,%s,%s,%s,%s\n", s.method.c_str(),
                     s.trials, csv_num(s.error_mean).c_str(),
                     csv_num(s.error_std).c_str(), csv_num(s.error_min).c_str(),
                     csv_num(s.error_max).c_str(),
                     csv_num(s.pseudo_accuracy_mean).c_str());
    }
}

}  // namespace pnntrain
