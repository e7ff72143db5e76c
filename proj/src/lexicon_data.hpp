#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

namespace fairvec::data {

struct WeatData {
  std::string_view name;
  std::vector<std::string_view> x, y, a, b;
};

struct SemBiasCell {
  std::string_view a, b;
  std::string_view label = "none";
};

struct SemBiasRow {
  SemBiasCell pairs[4];
};

const std::vector<std::pair<std::string_view, std::string_view>> &definitional_pairs();
const std::vector<std::pair<std::string_view, std::string_view>> &equalize_pairs();
const std::vector<std::string_view> &gender_specific();
const WeatData &weat_career_family();
const std::vector<SemBiasRow> &sembias_sample();

} // namespace fairvec::data
