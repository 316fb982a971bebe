#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <variant>

#include "kanlab/kan/kan.hpp"
#include "kanlab/mlp/mlp.hpp"

namespace kanlab::io {

using Model = std::variant<kan::KanNetwork, mlp::MlpNetwork>;

// Self-describing line-oriented text format ("kanlab-model v1") carrying a
// model-kind tag, shape, degree/grid/domain (KAN) or activation (MLP), and
// all parameters.  Doubles use the shortest round-trip form, so
// save -> load -> forward is bit-exact.
void save_model(std::ostream& os, const Model& model);
Model load_model(std::istream& is);

void save_model_file(const std::string& path, const Model& model);
Model load_model_file(const std::string& path);

}  // namespace kanlab::io
