#pragma once

#include <string>

#include <json.hpp>

#include "spf/mixture.hpp"
#include "spf/nn.hpp"

namespace spf::io {

/// Fixed shortest-distinct formatting for CSV output; identical doubles always
/// produce identical text, so reruns are byte-comparable.
std::string fmt_double(double v);

nlohmann::json mixture_to_json(const mixture::MixtureModel& model);
mixture::MixtureModel mixture_from_json(const nlohmann::json& j);

/// Checkpoint: {"layer_sizes": [...], "activation": "...", "params": [...]}.
void save_checkpoint(const nn::MlpClassifier& model, const std::string& path);
nn::MlpClassifier load_checkpoint(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace spf::io
