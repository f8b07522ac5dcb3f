#include "pnntrain/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "pnntrain/errors.hpp"
#include "pnntrain/rng.hpp"

namespace pnntrain {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// gzopen reads plain files transparently, so one path serves both.
std::string read_all_text(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) {
        throw DataError("cannot open file: " + path);
    }
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) {
        out.append(buf, static_cast<std::size_t>(n));
    }
    const bool failed = n < 0;
    gzclose(f);
    if (failed) {
        throw DataError("read error in file: " + path);
    }
    return out;
}

int parse_label(const char*& p, const std::string& path, std::size_t lineno) {
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p) {
        throw DataError(path + ":" + std::to_string(lineno) + ": missing label");
    }
    if (std::floor(v) != v || v < -1e9 || v > 1e9) {
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": label is not an integer");
    }
    p = end;
    return static_cast<int>(v);
}

}  // namespace

std::vector<Sample> generate_two_moons(int n_per_class, double noise_std,
                                       std::uint64_t seed) {
    if (n_per_class <= 0) {
        throw ConfigError("two moons: n_per_class must be positive");
    }
    if (noise_std < 0.0) {
        throw ConfigError("two moons: noise_std must be non-negative");
    }
    Rng rng(seed);
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(2 * n_per_class));
    const int n = n_per_class;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < n; ++i) {
            const double t = (n == 1) ? 0.0 : kPi * i / (n - 1);
            double x, y;
            if (cls == 0) {
                x = std::cos(t);
                y = std::sin(t);
            } else {
                x = 1.0 - std::cos(t);
                y = 0.5 - std::sin(t);
            }
            x += rng.normal(0.0, noise_std);
            y += rng.normal(0.0, noise_std);
            out.push_back(Sample{{x, y}, cls});
        }
    }
    return out;
}

std::vector<Sample> load_samples(const std::string& path) {
    const std::string text = read_all_text(path);

    std::vector<Sample> out;
    std::vector<std::vector<std::pair<int, double>>> sparse_rows;
    bool sparse = false;
    bool layout_known = false;
    std::size_t dense_dim = 0;
    int max_index = 0;

    std::size_t lineno = 0;
    const char* cursor = text.c_str();
    const char* text_end = cursor + text.size();
    while (cursor < text_end) {
        ++lineno;
        const char* nl = static_cast<const char*>(
            std::memchr(cursor, '\n', static_cast<std::size_t>(text_end - cursor)));
        const std::string line(cursor, nl ? nl : text_end);
        cursor = nl ? nl + 1 : text_end;

        const char* p = line.c_str();
        while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
        if (*p == '\0' || *p == '#') continue;

        if (!layout_known) {
            sparse = line.find(':') != std::string::npos;
            layout_known = true;
        }

        const int label = parse_label(p, path, lineno);

        if (sparse) {
            std::vector<std::pair<int, double>> row;
            while (true) {
                while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
                if (*p == '\0' || *p == '#') break;
                char* end = nullptr;
                const long idx = std::strtol(p, &end, 10);
                if (end == p || *end != ':' || idx < 1) {
                    throw DataError(path + ":" + std::to_string(lineno) +
                                    ": expected index:value entry");
                }
                p = end + 1;
                const double val = std::strtod(p, &end);
                if (end == p) {
                    throw DataError(path + ":" + std::to_string(lineno) +
                                    ": expected index:value entry");
                }
                p = end;
                row.emplace_back(static_cast<int>(idx), val);
                max_index = std::max(max_index, static_cast<int>(idx));
            }
            sparse_rows.push_back(std::move(row));
            out.push_back(Sample{{}, label});
        } else {
            std::vector<double> values;
            while (true) {
                while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
                if (*p == '\0' || *p == '#') break;
                char* end = nullptr;
                const double val = std::strtod(p, &end);
                if (end == p) {
                    throw DataError(path + ":" + std::to_string(lineno) +
                                    ": malformed feature value");
                }
                p = end;
                values.push_back(val);
            }
            if (values.empty()) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": no feature values");
            }
            if (dense_dim == 0) {
                dense_dim = values.size();
            } else if (values.size() != dense_dim) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": expected " + std::to_string(dense_dim) +
                                " features, got " + std::to_string(values.size()));
            }
            out.push_back(Sample{std::move(values), label});
        }
    }

    if (out.empty()) {
        throw DataError(path + ": no samples");
    }

    if (sparse) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::vector<double> values(static_cast<std::size_t>(max_index), 0.0);
            for (const auto& [idx, val] : sparse_rows[i]) {
                values[static_cast<std::size_t>(idx - 1)] = val;
            }
            out[i].features = std::move(values);
        }
    }

    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& s : out) {
        lo = std::min(lo, *s.label);
        hi = std::max(hi, *s.label);
    }
    if (lo >= 1 && hi == 10) {
        // Digit sets are often labeled 1..10; renumber to 0-based ids.
        for (auto& s : out) s.label = *s.label - 1;
    } else if (lo < 0) {
        throw DataError(path + ": negative class label " + std::to_string(lo));
    }
    return out;
}

UspsData load_usps(const std::string& train_path, const std::string& test_path) {
    UspsData data;
    data.train = load_samples(train_path);
    data.test = load_samples(test_path);

    std::size_t dim = 0;
    for (const auto& s : data.train) dim = std::max(dim, s.features.size());
    for (const auto& s : data.test) dim = std::max(dim, s.features.size());
    for (auto* part : {&data.train, &data.test}) {
        for (auto& s : *part) s.features.resize(dim, 0.0);
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : data.train) {
        for (double v : s.features) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double span = hi - lo;
    for (auto* part : {&data.train, &data.test}) {
        for (auto& s : *part) {
            for (double& v : s.features) {
                v = span > 0.0 ? -1.0 + 2.0 * (v - lo) / span : 0.0;
            }
        }
    }
    return data;
}

LabeledRequest LabeledRequest::per_class(int n) {
    if (n < 1) throw ConfigError("labeled per-class count must be at least 1");
    LabeledRequest r;
    r.count_per_class = n;
    return r;
}

LabeledRequest LabeledRequest::fraction(double frac) {
    if (!(frac > 0.0) || frac > 1.0) {
        throw ConfigError("labeled fraction must be in (0, 1]");
    }
    LabeledRequest r;
    r.frac = frac;
    return r;
}

SplitDataset::SplitDataset(std::vector<Sample> labeled,
                           std::vector<Sample> unlabeled,
                           std::vector<int> unlabeled_truth,
                           std::vector<Sample> test, int num_classes, int dim)
    : labeled_(std::move(labeled)),
      unlabeled_(std::move(unlabeled)),
      unlabeled_truth_(std::move(unlabeled_truth)),
      test_(std::move(test)),
      num_classes_(num_classes),
      dim_(dim) {
    if (unlabeled_.size() != unlabeled_truth_.size()) {
        throw DataError("unlabeled truth is not aligned with the unlabeled pool");
    }
    if (labeled_.empty()) {
        throw DataError("split has no labeled samples");
    }
}

SplitDataset split_semi_supervised(const std::vector<Sample>& data,
                                   const LabeledRequest& request,
                                   std::uint64_t seed,
                                   std::vector<Sample> test) {
    if (data.empty()) throw DataError("split: empty dataset");
    if (!request.count_per_class && !request.frac) {
        throw ConfigError("split: labeled request is empty");
    }

    const std::size_t dim = data[0].features.size();
    int max_label = 0;
    for (const auto& s : data) {
        if (!s.label) throw DataError("split: pool sample has no label");
        if (*s.label < 0) throw DataError("split: negative class label");
        if (s.features.size() != dim) {
            throw DataError("split: inconsistent feature dimensions");
        }
        max_label = std::max(max_label, *s.label);
    }
    for (const auto& s : test) {
        if (!s.label) throw DataError("split: test sample has no label");
        if (*s.label < 0) throw DataError("split: negative class label");
        if (s.features.size() != dim) {
            throw DataError("split: test feature dimension mismatch");
        }
        max_label = std::max(max_label, *s.label);
    }
    const int num_classes = max_label + 1;

    std::vector<std::vector<std::size_t>> by_class(
        static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_class[static_cast<std::size_t>(*data[i].label)].push_back(i);
    }
    for (int c = 0; c < num_classes; ++c) {
        if (by_class[static_cast<std::size_t>(c)].empty()) {
            throw DataError("split: class " + std::to_string(c) +
                            " has no samples in the pool");
        }
    }

    // Per-class labeled counts.
    std::vector<std::size_t> take(static_cast<std::size_t>(num_classes));
    if (request.count_per_class) {
        const auto n = static_cast<std::size_t>(*request.count_per_class);
        for (int c = 0; c < num_classes; ++c) {
            if (by_class[static_cast<std::size_t>(c)].size() < n) {
                throw ConfigError("split: class " + std::to_string(c) + " has " +
                                  std::to_string(by_class[size_t(c)].size()) +
                                  " samples, fewer than requested " +
                                  std::to_string(n));
            }
            take[static_cast<std::size_t>(c)] = n;
        }
    } else {
        const double frac = *request.frac;
        const auto target = static_cast<std::size_t>(std::llround(
            frac * static_cast<double>(data.size())));
        std::size_t total = 0;
        for (int c = 0; c < num_classes; ++c) {
            const std::size_t nc = by_class[static_cast<std::size_t>(c)].size();
            take[static_cast<std::size_t>(c)] = std::max<std::size_t>(
                1, static_cast<std::size_t>(frac * static_cast<double>(nc)));
            total += take[static_cast<std::size_t>(c)];
        }
        // Settle the rounding debt one sample at a time, visiting classes
        // from largest to smallest (ties to the lower id) so adjustments
        // land where they distort the per-class ratio least.
        std::vector<int> order(static_cast<std::size_t>(num_classes));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return by_class[size_t(a)].size() > by_class[size_t(b)].size();
        });
        std::size_t guard = 0;
        while (total < target && guard < 2 * data.size()) {
            bool moved = false;
            for (int c : order) {
                if (total == target) break;
                if (take[size_t(c)] < by_class[size_t(c)].size()) {
                    ++take[size_t(c)];
                    ++total;
                    moved = true;
                }
            }
            if (!moved) break;
            ++guard;
        }
        while (total > target) {
            bool moved = false;
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                if (total == target) break;
                if (take[size_t(*it)] > 1) {
                    --take[size_t(*it)];
                    --total;
                    moved = true;
                }
            }
            if (!moved) break;  // every class is at its floor of one
        }
    }

    Rng rng(seed);
    std::vector<std::size_t> labeled_idx, unlabeled_idx;
    for (int c = 0; c < num_classes; ++c) {
        auto& idx = by_class[static_cast<std::size_t>(c)];
        rng.shuffle(idx);
        const std::size_t n = take[static_cast<std::size_t>(c)];
        labeled_idx.insert(labeled_idx.end(), idx.begin(), idx.begin() + n);
        unlabeled_idx.insert(unlabeled_idx.end(), idx.begin() + n, idx.end());
    }
    std::sort(labeled_idx.begin(), labeled_idx.end());
    std::sort(unlabeled_idx.begin(), unlabeled_idx.end());

    std::vector<Sample> labeled;
    labeled.reserve(labeled_idx.size());
    for (std::size_t i : labeled_idx) labeled.push_back(data[i]);

    std::vector<Sample> unlabeled;
    std::vector<int> truth;
    unlabeled.reserve(unlabeled_idx.size());
    truth.reserve(unlabeled_idx.size());
    for (std::size_t i : unlabeled_idx) {
        unlabeled.push_back(Sample{data[i].features, std::nullopt});
        truth.push_back(*data[i].label);
    }

    return SplitDataset(std::move(labeled), std::move(unlabeled),
                        std::move(truth), std::move(test), num_classes,
                        static_cast<int>(dim));
}

}  // namespace pnntrain
