#pragma once

#include "kgo/evaluate.hpp"

#include <string>

namespace kgo {

inline constexpr int kModelVersion = 1;

std::string serialize_model(const KgoModel& model);
KgoModel deserialize_model(const std::string& text);

void save_model(const KgoModel& model, const std::string& path);
KgoModel load_model(const std::string& path);

}  // namespace kgo
