#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pnntrain/sample.hpp"

namespace pnntrain {

// Two interleaving half circles in the plane, n_per_class points each,
// with isotropic Gaussian noise of the given standard deviation added to
// both coordinates. Class 0 comes first in the returned vector. The arc
// parameter runs over [0, pi] in equal steps (a single point sits at 0).
std::vector<Sample> generate_two_moons(int n_per_class, double noise_std,
                                       std::uint64_t seed);

// Whitespace-separated text, one sample per line. Two layouts are
// auto-detected from the first data line: dense ("label v1 v2 ... vd")
// and sparse ("label idx:val ...", 1-based indices). Lines that are
// empty or start with '#' are skipped. Files ending in .gz are
// decompressed transparently. Labels must be integers; 1..10 data (a
// common digit-set convention) is shifted down to 0..9.
std::vector<Sample> load_samples(const std::string& path);

struct UspsData {
    std::vector<Sample> train;
    std::vector<Sample> test;
};

// Loads a train/test pair via load_samples and linearly rescales both
// parts to [-1, 1] using the global min/max of the *training* features,
// so the test set sees exactly the transform fitted on train.
UspsData load_usps(const std::string& train_path, const std::string& test_path);

// How many labeled samples to keep per class when splitting.
struct LabeledRequest {
    // Exactly n per class. Every class must have at least n samples.
    static LabeledRequest per_class(int n);
    // Round(frac * total) samples overall, allocated proportionally per
    // class with every class keeping at least one.
    static LabeledRequest fraction(double frac);

    std::optional<int> count_per_class;
    std::optional<double> frac;
};

// A semi-supervised view of one dataset: a small labeled set L, an
// unlabeled pool U whose true labels are hidden, and a held-out test set.
// U's ground truth stays physically present but is reachable only
// through the audit accessor, so training code cannot touch it by
// accident; it exists for after-the-fact diagnostics only.
class SplitDataset {
public:
    SplitDataset(std::vector<Sample> labeled, std::vector<Sample> unlabeled,
                 std::vector<int> unlabeled_truth, std::vector<Sample> test,
                 int num_classes, int dim);

    const std::vector<Sample>& labeled() const { return labeled_; }
    const std::vector<Sample>& unlabeled() const { return unlabeled_; }
    const std::vector<Sample>& test() const { return test_; }
    int num_classes() const { return num_classes_; }
    int dim() const { return dim_; }

    // True labels of unlabeled(), index-aligned. Reporting only.
    const std::vector<int>& audit_unlabeled_truth() const { return unlabeled_truth_; }

private:
    std::vector<Sample> labeled_;
    std::vector<Sample> unlabeled_;
    std::vector<int> unlabeled_truth_;
    std::vector<Sample> test_;
    int num_classes_;
    int dim_;
};

// Stratified labeled/unlabeled split of `data` (all of which must be
// labeled). Within each class the kept-labeled subset is chosen by a
// seeded shuffle. If `test` is supplied it is passed through unchanged;
// otherwise the test set is empty. Unlabeled samples have their labels
// stripped; the originals are retained for audit only.
SplitDataset split_semi_supervised(const std::vector<Sample>& data,
                                   const LabeledRequest& request,
                                   std::uint64_t seed,
                                   std::vector<Sample> test = {});

}  // namespace pnntrain
