#include "frmsm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"

#include "frmsm/error.hpp"

namespace frmsm {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<const ManifestEntry*> sorted_entries(const DatasetManifest& manifest) {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : manifest.entries) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const ManifestEntry* a, const ManifestEntry* b) { return a->id < b->id; });
  return out;
}

double score_pair(const ManifestEntry& tpl, const std::filesystem::path& input,
                  const MatchConfig& cfg, MinutiaeCache& cache) {
  const MinutiaeSet& t = cache.get(tpl.template_path);
  const MinutiaeSet& i = cache.get(input);
  try {
    return match(t, i, cfg).score;
  } catch (const Error& e) {
    throw Error(ErrorCode::Pipeline, "match " + input.string() + " against " +
                                         tpl.template_path.string() + ": " +
                                         error_code_name(e.code()) + ": " + e.what());
  }
}

std::vector<Attempt> score(const DatasetManifest& manifest, const MatchConfig& cfg,
                           MinutiaeCache& cache, bool enrollee, bool imposter) {
  validate(manifest);
  validate(cfg);
  const auto entries = sorted_entries(manifest);
  std::vector<Attempt> attempts;
  for (const ManifestEntry* owner : entries) {
    for (std::size_t idx = 0; idx < owner->inputs.size(); ++idx) {
      const auto& input = owner->inputs[idx];
      for (const ManifestEntry* tpl : entries) {
        const bool same = tpl == owner;
        if ((same && !enrollee) || (!same && !imposter)) continue;
        attempts.push_back({owner->id, input.string(), idx, tpl->id,
                            same ? AttemptKind::Enrollee : AttemptKind::Imposter,
                            score_pair(*tpl, input, cfg, cache)});
      }
    }
  }
  return attempts;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir,
                               const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidManifest, source_name + ": " + e.what());
  }
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidManifest, source_name + ": " + what);
  };
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    fail("expected an object with an \"entries\" array");
  }
  const auto resolve = [&](const json& v, const std::string& what) {
    if (!v.is_string()) fail(what + " must be a string path");
    std::filesystem::path p = v.get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };

  DatasetManifest manifest;
  for (const auto& item : doc["entries"]) {
    if (!item.is_object()) fail("entry must be an object");
    for (const auto& [key, _] : item.items()) {
      if (key != "id" && key != "template" && key != "inputs") fail("unknown entry key '" + key + "'");
    }
    if (!item.contains("id") || !item["id"].is_string()) fail("entry without string \"id\"");
    if (!item.contains("template")) fail("entry without \"template\"");
    if (!item.contains("inputs") || !item["inputs"].is_array()) fail("entry without \"inputs\" array");
    ManifestEntry entry;
    entry.id = item["id"].get<std::string>();
    entry.template_path = resolve(item["template"], "template");
    for (const auto& in : item["inputs"]) entry.inputs.push_back(resolve(in, "input"));
    manifest.entries.push_back(std::move(entry));
  }
  validate(manifest);
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                        path.parent_path(), path.string());
}

void validate(const DatasetManifest& manifest) {
  if (manifest.entries.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no entries");
  std::set<std::string> ids;
  for (const auto& e : manifest.entries) {
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::InvalidManifest, "duplicate identity '" + e.id + "'");
    }
    if (e.inputs.empty()) {
      throw Error(ErrorCode::InvalidManifest, "identity '" + e.id + "' has no inputs");
    }
  }
}

const MinutiaeSet& MinutiaeCache::get(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const bool csv = is_csv_path(path);
  const auto key = std::make_pair(csv, fnv1a(bytes));
  if (auto it = sets_.find(key); it != sets_.end()) return it->second;

  MinutiaeSet set;
  if (csv) {
    set = parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                    path.string());
  } else {
    const GrayImage img = decode_pgm(bytes, path.string());
    try {
      set = extract_minutiae(img, cfg_);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  return sets_.emplace(key, std::move(set)).first->second;
}

std::vector<Attempt> score_enrollee(const DatasetManifest& manifest, const MatchConfig& cfg,
                                    MinutiaeCache& cache) {
  return score(manifest, cfg, cache, true, false);
}

std::vector<Attempt> score_imposter(const DatasetManifest& manifest, const MatchConfig& cfg,
                                    MinutiaeCache& cache) {
  validate(manifest);
  if (manifest.entries.size() < 2) {
    throw Error(ErrorCode::NeedTwoIdentities, "imposter attempts need at least two identities");
  }
  return score(manifest, cfg, cache, false, true);
}

std::vector<Attempt> score_all(const DatasetManifest& manifest, const MatchConfig& cfg,
                               MinutiaeCache& cache) {
  validate(manifest);
  if (manifest.entries.size() < 2) {
    throw Error(ErrorCode::NeedTwoIdentities, "imposter attempts need at least two identities");
  }
  return score(manifest, cfg, cache, true, true);
}

EvalReport summarize(const std::vector<Attempt>& attempts, double threshold) {
  EvalReport report;
  report.threshold = threshold;
  report.per_attempt.reserve(attempts.size());
  for (const auto& a : attempts) {
    bool accepted = false;
    if (a.kind == AttemptKind::Enrollee) {
      ++report.enrollee_attempts;
      accepted = !(a.score < threshold);
      if (!accepted) ++report.false_non_matches;
    } else {
      ++report.imposter_attempts;
      accepted = a.score > threshold;
      if (accepted) ++report.false_matches;
    }
    report.per_attempt.push_back({a, accepted});
  }
  report.fmr = ratio(report.false_matches, report.imposter_attempts);
  report.fnmr = ratio(report.false_non_matches, report.enrollee_attempts);
  return report;
}

EvalReport run_enrollee(const DatasetManifest& manifest, const MatchConfig& cfg,
                        const PipelineConfig& pipeline) {
  MinutiaeCache cache(pipeline);
  return summarize(score_enrollee(manifest, cfg, cache), cfg.decision_threshold);
}

EvalReport run_imposter(const DatasetManifest& manifest, const MatchConfig& cfg,
                        const PipelineConfig& pipeline) {
  MinutiaeCache cache(pipeline);
  return summarize(score_imposter(manifest, cfg, cache), cfg.decision_threshold);
}

EvalReport evaluate(const DatasetManifest& manifest, const MatchConfig& cfg,
                    const PipelineConfig& pipeline) {
  MinutiaeCache cache(pipeline);
  return summarize(score_all(manifest, cfg, cache), cfg.decision_threshold);
}

std::vector<SweepPoint> sweep(const std::vector<Attempt>& attempts, double start, double stop,
                              double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs start <= stop and step > 0");
  }
  const auto steps = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<SweepPoint> points;
  for (long i = 0; i <= steps; ++i) {
    const double t = start + static_cast<double>(i) * step;
    const EvalReport r = summarize(attempts, t);
    points.push_back({t, r.fmr, r.fnmr});
  }
  return points;
}

std::string to_json(const EvalReport& report) {
  json rows = json::array();
  for (const auto& o : report.per_attempt) {
    rows.push_back({
        {"input", o.attempt.input_path},
        {"input_id", o.attempt.input_id},
        {"template_id", o.attempt.template_id},
        {"kind", o.attempt.kind == AttemptKind::Enrollee ? "enrollee" : "imposter"},
        {"score", o.attempt.score},
        {"outcome", o.accepted ? "match" : "non-match"},
    });
  }
  const json j = {
      {"false_matches", report.false_matches},
      {"imposter_attempts", report.imposter_attempts},
      {"false_non_matches", report.false_non_matches},
      {"enrollee_attempts", report.enrollee_attempts},
      {"fmr", report.fmr},
      {"fnmr", report.fnmr},
      {"threshold", report.threshold},
      {"per_attempt", rows},
  };
  return j.dump();
}

std::string attempts_csv(const EvalReport& report) {
  std::string out = "input_id,input,template_id,kind,score,outcome\n";
  char score[32];
  for (const auto& o : report.per_attempt) {
    std::snprintf(score, sizeof score, "%.6f", o.attempt.score);
    out += o.attempt.input_id + "," + o.attempt.input_path + "," + o.attempt.template_id + "," +
           (o.attempt.kind == AttemptKind::Enrollee ? "enrollee" : "imposter") + "," + score +
           "," + (o.accepted ? "match" : "non-match") + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out = "threshold,fmr,fnmr\n";
  char line[96];
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%.4f,%.6f,%.6f\n", p.threshold, p.fmr, p.fnmr);
    out += line;
  }
  return out;
}

}  // namespace frmsm
