#pragma once

#include <optional>
#include <vector>

namespace pnntrain {

// One observation: a dense feature vector and, when known, a class label
// in [0, num_classes).
struct Sample {
    std::vector<double> features;
    std::optional<int> label;
};

}  // namespace pnntrain
