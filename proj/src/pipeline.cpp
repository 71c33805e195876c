#include "frmsm/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "frmsm/error.hpp"

namespace frmsm {

void validate(const PipelineConfig& cfg) {
  if (cfg.binarize.threshold < 0 || cfg.binarize.threshold > 255) {
    throw Error(ErrorCode::InvalidConfig, "threshold must be in [0,255]");
  }
  if (cfg.margin < 0) throw Error(ErrorCode::InvalidConfig, "margin must be non-negative");
  if (cfg.trace_len < 1) throw Error(ErrorCode::InvalidConfig, "trace_len must be at least 1");
  if (cfg.valley_window < 5) {
    throw Error(ErrorCode::InvalidConfig, "valley_window must be at least 5");
  }
  if (cfg.max_iterations && *cfg.max_iterations < 1) {
    throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");
  }
}

BinaryImage binarize_stage(const GrayImage& img, const PipelineConfig& cfg) {
  BinarizeConfig b = cfg.binarize;
  if (cfg.auto_threshold) b.threshold = mean_threshold(img);
  return binarize(img, b);
}

MinutiaeSet extract_minutiae(const GrayImage& img, const PipelineConfig& cfg) {
  validate(cfg);
  const char* stage = "binarize";
  try {
    const BinaryImage binary = binarize_stage(img, cfg);
    stage = "thin";
    const BinaryImage skeleton = thin(binary, cfg.thin_config());
    stage = "extract";
    return extract(skeleton, cfg.extract_config());
  } catch (const Error& e) {
    throw Error(ErrorCode::Pipeline, std::string(stage) + ": " + error_code_name(e.code()) +
                                         ": " + e.what());
  }
}

bool is_csv_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv";
}

MinutiaeSet load_minutiae(const std::filesystem::path& path, const PipelineConfig& cfg) {
  if (is_csv_path(path)) return load_csv(path);
  const GrayImage img = load_image(path);
  try {
    return extract_minutiae(img, cfg);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace frmsm
