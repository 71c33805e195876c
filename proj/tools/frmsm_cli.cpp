// Command-line front end. Talks to the library only through frmsm.h.
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "frmsm/frmsm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonMatch = 1;
constexpr int kExitError = 2;

struct StageError {
  std::string stage;
  std::string message;
};

void check(frmsm_status status, const std::string& stage) {
  if (status != FRMSM_OK) throw StageError{stage, frmsm_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using Config = std::unique_ptr<frmsm_config, Deleter<frmsm_config, frmsm_config_destroy>>;
using Image = std::unique_ptr<frmsm_image, Deleter<frmsm_image, frmsm_image_destroy>>;
using Minutiae =
    std::unique_ptr<frmsm_minutiae, Deleter<frmsm_minutiae, frmsm_minutiae_destroy>>;
using Evaluation =
    std::unique_ptr<frmsm_evaluation, Deleter<frmsm_evaluation, frmsm_evaluation_destroy>>;
using String = std::unique_ptr<char, Deleter<char, frmsm_string_free>>;

Image load_image(const std::string& path, const std::string& stage) {
  frmsm_image* raw = nullptr;
  check(frmsm_image_load(path.c_str(), &raw), stage + ": load image");
  return Image(raw);
}

Minutiae load_minutiae(const std::string& path, const frmsm_config* cfg,
                       const std::string& stage) {
  frmsm_minutiae* raw = nullptr;
  check(frmsm_minutiae_load(path.c_str(), cfg, &raw), stage + ": " + path);
  return Minutiae(raw);
}

// Flags given on the command line override the config file, which
// overrides the library defaults.
struct GlobalFlags {
  std::optional<std::string> config_file;
  std::vector<std::pair<std::string, std::optional<std::string>>> settings = {
      {"threshold", {}},   {"margin", {}},           {"r_tol", {}},
      {"phi_tol", {}},     {"theta_tol", {}},        {"decision_threshold", {}},
      {"trace_len", {}},   {"require_same_type", {}}, {"auto_threshold", {}},
  };

  std::optional<std::string>& at(const std::string& key) {
    for (auto& [k, v] : settings) {
      if (k == key) return v;
    }
    std::abort();
  }

  Config build() {
    frmsm_config* raw = nullptr;
    check(frmsm_config_create(&raw), "config");
    Config cfg(raw);
    if (config_file) check(frmsm_config_load_file(cfg.get(), config_file->c_str()), "config");
    for (const auto& [key, value] : settings) {
      if (value) check(frmsm_config_set(cfg.get(), key.c_str(), value->c_str()), "config");
    }
    check(frmsm_config_validate(cfg.get()), "config");
    return cfg;
  }
};

int cmd_binarize(GlobalFlags& flags, const std::string& in, const std::string& out) {
  const Config cfg = flags.build();
  const Image gray = load_image(in, "binarize");
  frmsm_image* raw = nullptr;
  check(frmsm_binarize(gray.get(), cfg.get(), &raw), "binarize");
  const Image binary(raw);
  check(frmsm_image_save(binary.get(), out.c_str()), "binarize: save");
  return kExitOk;
}

int cmd_thin(GlobalFlags& flags, const std::string& in, const std::string& out) {
  const Config cfg = flags.build();
  const Image gray = load_image(in, "thin");
  frmsm_image* raw = nullptr;
  check(frmsm_image_to_binary(gray.get(), &raw), "thin");
  const Image binary(raw);
  check(frmsm_thin(binary.get(), cfg.get(), &raw), "thin");
  const Image skeleton(raw);
  check(frmsm_image_save(skeleton.get(), out.c_str()), "thin: save");
  return kExitOk;
}

int cmd_extract(GlobalFlags& flags, const std::string& in, const std::string& out) {
  const Config cfg = flags.build();
  const Image gray = load_image(in, "extract");
  frmsm_minutiae* raw = nullptr;
  check(frmsm_extract_image(gray.get(), cfg.get(), &raw), "extract");
  const Minutiae set(raw);
  check(frmsm_minutiae_save_csv(set.get(), out.c_str()), "extract: save");
  std::printf("%zu\n", frmsm_minutiae_count(set.get()));
  return kExitOk;
}

int cmd_match(GlobalFlags& flags, const std::string& a, const std::string& b) {
  const Config cfg = flags.build();
  const Minutiae tpl = load_minutiae(a, cfg.get(), "match: template");
  const Minutiae input = load_minutiae(b, cfg.get(), "match: input");
  frmsm_match_result result{};
  check(frmsm_match(tpl.get(), input.get(), cfg.get(), &result), "match");
  char* json = nullptr;
  check(frmsm_match_result_json(&result, &json), "match");
  const String text(json);
  std::printf("%s\n", text.get());
  return result.is_match ? kExitOk : kExitNonMatch;
}

int cmd_render(GlobalFlags& flags, const std::string& image, const std::string& csv,
               const std::string& out) {
  flags.build();
  const Image gray = load_image(image, "render");
  frmsm_minutiae* raw = nullptr;
  check(frmsm_minutiae_load_csv(csv.c_str(), &raw), "render: load minutiae");
  const Minutiae set(raw);
  check(frmsm_render_overlay(gray.get(), set.get(), out.c_str()), "render");
  return kExitOk;
}

bool write_text(const std::string& path, const char* text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return false;
  const bool ok = std::fputs(text, f) >= 0;
  return std::fclose(f) == 0 && ok;
}

struct EvaluateArgs {
  std::string manifest;
  std::optional<std::string> threshold;
  std::optional<std::string> sweep;
  std::optional<std::string> report_path;
  std::optional<std::string> attempts_path;
};

int cmd_evaluate(GlobalFlags& flags, const EvaluateArgs& args) {
  if (args.threshold) flags.at("decision_threshold") = *args.threshold;
  const Config cfg = flags.build();
  double threshold = 0.0;
  check(frmsm_config_get_double(cfg.get(), "decision_threshold", &threshold), "evaluate");

  frmsm_evaluation* raw = nullptr;
  check(frmsm_evaluate(args.manifest.c_str(), cfg.get(), &raw), "evaluate");
  const Evaluation eval(raw);

  char* text = nullptr;
  check(frmsm_evaluation_report_json(eval.get(), threshold, &text), "evaluate: report");
  const String report(text);
  if (args.attempts_path) {
    check(frmsm_evaluation_attempts_csv(eval.get(), threshold, &text), "evaluate: attempts");
    const String attempts(text);
    if (!write_text(*args.attempts_path, attempts.get())) {
      throw StageError{"evaluate", "cannot write " + *args.attempts_path};
    }
  }
  if (args.report_path && !write_text(*args.report_path, (std::string(report.get()) + "\n").c_str())) {
    throw StageError{"evaluate", "cannot write " + *args.report_path};
  }

  if (args.sweep) {
    double start = 0, stop = 0, step = 0;
    char tail = 0;
    if (std::sscanf(args.sweep->c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &tail) != 3) {
      throw StageError{"evaluate", "--sweep expects start:stop:step, got '" + *args.sweep + "'"};
    }
    check(frmsm_evaluation_sweep_csv(eval.get(), start, stop, step, &text), "evaluate: sweep");
    const String curve(text);
    std::fputs(curve.get(), stdout);
  } else if (!args.report_path) {
    std::printf("%s\n", report.get());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fingerprint minutiae extraction and matching"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--config", flags.config_file, "key = value settings file");
  app.add_option("--threshold", flags.at("threshold"), "binarization threshold (0-255)");
  app.add_flag("--auto-threshold", [&](std::int64_t) { flags.at("auto_threshold") = "true"; },
               "binarize at the mean intensity");
  app.add_option("--margin", flags.at("margin"), "whitened boundary width in pixels");
  app.add_option("--trace-len", flags.at("trace_len"), "pixels traced for minutia angles");
  app.add_option("--r-tol", flags.at("r_tol"), "radial tolerance in pixels");
  app.add_option("--phi-tol", flags.at("phi_tol"), "radial-angle tolerance in degrees");
  app.add_option("--theta-tol", flags.at("theta_tol"), "orientation tolerance in degrees");
  app.add_option("--decision-threshold", flags.at("decision_threshold"),
                 "score above which two prints match");
  app.add_flag("--any-type", [&](std::int64_t) { flags.at("require_same_type") = "false"; },
               "let terminations pair with bifurcations");

  std::string in, out, csv, second;
  int exit_code = kExitOk;
  std::function<int()> run;

  auto* binarize = app.add_subcommand("binarize", "gray PGM -> binary PGM (ridge = 255)");
  binarize->add_option("input", in)->required();
  binarize->add_option("output", out)->required();
  binarize->callback([&] { run = [&] { return cmd_binarize(flags, in, out); }; });

  auto* thin = app.add_subcommand("thin", "binary PGM -> one-pixel skeleton PGM");
  thin->add_option("input", in)->required();
  thin->add_option("output", out)->required();
  thin->callback([&] { run = [&] { return cmd_thin(flags, in, out); }; });

  auto* extract = app.add_subcommand("extract", "gray PGM -> minutiae data-matrix CSV");
  extract->add_option("image", in)->required();
  extract->add_option("output", out)->required();
  extract->callback([&] { run = [&] { return cmd_extract(flags, in, out); }; });

  auto* match = app.add_subcommand("match", "match two prints (PGM or CSV); exit 0 match, 1 not");
  match->add_option("template", in)->required();
  match->add_option("input", second)->required();
  match->callback([&] { run = [&] { return cmd_match(flags, in, second); }; });

  auto* render = app.add_subcommand("render", "draw minutiae markers over an image");
  render->add_option("image", in)->required();
  render->add_option("minutiae", csv)->required();
  render->add_option("output", out)->required();
  render->callback([&] { run = [&] { return cmd_render(flags, in, csv, out); }; });

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "FMR/FNMR over a dataset manifest");
  evaluate->add_option("--manifest", eval_args.manifest)->required();
  evaluate->add_option("--threshold", eval_args.threshold, "decision threshold");
  evaluate->add_option("--sweep", eval_args.sweep, "start:stop:step threshold sweep as CSV");
  evaluate->add_option("--report", eval_args.report_path, "write the JSON report here");
  evaluate->add_option("--attempts-csv", eval_args.attempts_path, "per-attempt CSV");
  evaluate->callback([&] { run = [&] { return cmd_evaluate(flags, eval_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    exit_code = run();
  } catch (const StageError& e) {
    std::fprintf(stderr, "frmsm: %s: %s\n", e.stage.c_str(), e.message.c_str());
    return kExitError;
  }
  return exit_code;
}
