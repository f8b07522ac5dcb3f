#pragma once

#include <string>

#include "pnntrain/svm.hpp"

namespace pnntrain {

// Plain-text model files. Binary models:
//   svmtxt1 <family> <gamma> <c> <dim> <num_sv> <bias>
//   <coeff> <v1> ... <vdim>     (one line per support vector)
// One-against-all models start with "svmovr1 <num_classes>" followed by
// that many binary blocks. Doubles are written with 17 significant
// digits, so a save/load cycle reproduces the model bit for bit.
void save_binary_model(const SvmBinaryModel& model, const std::string& path);
SvmBinaryModel load_binary_model(const std::string& path);

void save_multiclass_model(const MulticlassModel& model, const std::string& path);
MulticlassModel load_multiclass_model(const std::string& path);

}  // namespace pnntrain
