#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "frmsm/matcher.hpp"
#include "frmsm/pipeline.hpp"

namespace frmsm {

struct ManifestEntry {
  std::string id;
  std::filesystem::path template_path;
  std::vector<std::filesystem::path> inputs;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// {"entries":[{"id":"p01","template":"t.pgm","inputs":["a.pgm"]}]}. Relative
// paths are resolved against base_dir.
DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir,
                               const std::string& source_name = "<manifest>");
DatasetManifest load_manifest(const std::filesystem::path& path);
void validate(const DatasetManifest& manifest);

enum class AttemptKind { Enrollee, Imposter };

struct Attempt {
  std::string input_id;
  std::string input_path;
  std::size_t input_index = 0;
  std::string template_id;
  AttemptKind kind = AttemptKind::Enrollee;
  double score = 0.0;
};

struct AttemptOutcome {
  Attempt attempt;
  bool accepted = false;
};

struct EvalReport {
  std::size_t false_matches = 0;
  std::size_t imposter_attempts = 0;
  std::size_t false_non_matches = 0;
  std::size_t enrollee_attempts = 0;
  double fmr = 0.0;
  double fnmr = 0.0;
  double threshold = 0.0;
  std::vector<AttemptOutcome> per_attempt;
};

// Minutiae per file, keyed by a hash of the file bytes so every template
// and input runs through the image pipeline once per evaluation.
class MinutiaeCache {
 public:
  explicit MinutiaeCache(PipelineConfig cfg) : cfg_(std::move(cfg)) {}

  const MinutiaeSet& get(const std::filesystem::path& path);
  std::size_t size() const { return sets_.size(); }

 private:
  PipelineConfig cfg_;
  std::map<std::pair<bool, std::uint64_t>, MinutiaeSet> sets_;
};

// Scores alone; thresholds are applied afterwards by summarize().
std::vector<Attempt> score_enrollee(const DatasetManifest& manifest, const MatchConfig& cfg,
                                    MinutiaeCache& cache);
std::vector<Attempt> score_imposter(const DatasetManifest& manifest, const MatchConfig& cfg,
                                    MinutiaeCache& cache);
// Both kinds, ordered by (input identity, input index, template identity).
std::vector<Attempt> score_all(const DatasetManifest& manifest, const MatchConfig& cfg,
                               MinutiaeCache& cache);

// An enrollee attempt fails when score < threshold; an imposter attempt is a
// false match when score > threshold. A score equal to the threshold is
// therefore accepted for enrollees and rejected for imposters.
EvalReport summarize(const std::vector<Attempt>& attempts, double threshold);

EvalReport run_enrollee(const DatasetManifest& manifest, const MatchConfig& cfg,
                        const PipelineConfig& pipeline);
EvalReport run_imposter(const DatasetManifest& manifest, const MatchConfig& cfg,
                        const PipelineConfig& pipeline);
EvalReport evaluate(const DatasetManifest& manifest, const MatchConfig& cfg,
                    const PipelineConfig& pipeline);

struct SweepPoint {
  double threshold = 0.0;
  double fmr = 0.0;
  double fnmr = 0.0;
};

// Thresholds start + i*step for every i with start + i*step <= stop.
std::vector<SweepPoint> sweep(const std::vector<Attempt>& attempts, double start, double stop,
                              double step);

std::string to_json(const EvalReport& report);
std::string attempts_csv(const EvalReport& report);
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace frmsm
