#pragma once

#include <filesystem>
#include <optional>

#include "frmsm/imaging.hpp"
#include "frmsm/minutiae.hpp"
#include "frmsm/preprocess.hpp"

namespace frmsm {

struct PipelineConfig {
  BinarizeConfig binarize;
  // Use the mean intensity instead of binarize.threshold.
  bool auto_threshold = false;
  int margin = 5;
  int trace_len = 10;
  int valley_window = 21;
  std::optional<int> max_iterations;

  ThinConfig thin_config() const { return {margin, max_iterations}; }
  ExtractConfig extract_config() const { return {margin, trace_len, valley_window}; }
};

void validate(const PipelineConfig& cfg);

BinaryImage binarize_stage(const GrayImage& img, const PipelineConfig& cfg);

// binarize -> whiten boundary -> thin -> extract. Failures are rethrown as
// Pipeline errors whose message starts with the stage name.
MinutiaeSet extract_minutiae(const GrayImage& img, const PipelineConfig& cfg);

bool is_csv_path(const std::filesystem::path& path);

// A `.csv` path is read as a data matrix; anything else is an image that
// goes through extract_minutiae.
MinutiaeSet load_minutiae(const std::filesystem::path& path, const PipelineConfig& cfg);

}  // namespace frmsm
