#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "splnc/baselines.hpp"
#include "splnc/trainer.hpp"

namespace splnc {

inline constexpr int kModelFormatVersion = 1;

/// Anything the `train` command can persist.
using StoredModel = std::variant<MulticlassModel, WishartCenters>;

/// JSON document with a format tag, version, method, config snapshot,
/// normalization statistics and per-class machines (or Wishart centers).
/// Reals round-trip exactly, so predictions survive save and load unchanged.
std::string model_to_json(const StoredModel& model);
StoredModel model_from_json(const std::string& text);

void save_model_file(const std::string& path, const StoredModel& model);
StoredModel load_model_file(const std::string& path);

std::vector<int> predict_stored(const StoredModel& model, const GridDataset& dataset);

}  // namespace splnc
