#include "frmsm/frmsm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>
#include <variant>

#include "frmsm/angles.hpp"
#include "frmsm/config.hpp"
#include "frmsm/error.hpp"
#include "frmsm/evaluation.hpp"
#include "frmsm/imaging.hpp"
#include "frmsm/matcher.hpp"
#include "frmsm/minutiae.hpp"
#include "frmsm/pipeline.hpp"
#include "frmsm/preprocess.hpp"

struct frmsm_config {
  frmsm::AppConfig value;
};

struct frmsm_image {
  std::variant<frmsm::GrayImage, frmsm::BinaryImage> value;
};

struct frmsm_minutiae {
  frmsm::MinutiaeSet value;
};

struct frmsm_evaluation {
  std::vector<frmsm::Attempt> attempts;
};

namespace {

thread_local std::string g_last_error;

static_assert(static_cast<int>(frmsm::ErrorCode::InvalidArgument) + 1 ==
              FRMSM_ERR_INVALID_ARGUMENT);

frmsm_status fail(frmsm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
frmsm_status guarded(F&& body) {
  try {
    body();
    return FRMSM_OK;
  } catch (const frmsm::Error& e) {
    return fail(static_cast<frmsm_status>(static_cast<int>(e.code()) + 1),
                std::string(frmsm::error_code_name(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRMSM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRMSM_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

const frmsm::GrayImage& gray_of(const frmsm_image* img) {
  require(img, "image");
  if (const auto* g = std::get_if<frmsm::GrayImage>(&img->value)) return *g;
  throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, "expected a gray image");
}

const frmsm::BinaryImage& binary_of(const frmsm_image* img) {
  require(img, "image");
  if (const auto* b = std::get_if<frmsm::BinaryImage>(&img->value)) return *b;
  throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, "expected a binary image");
}

frmsm::AppConfig config_of(const frmsm_config* cfg) {
  return cfg ? cfg->value : frmsm::AppConfig{};
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

frmsm::MatchResult to_cpp(const frmsm_match_result& r) {
  frmsm::MatchResult out;
  out.matched = r.matched;
  out.nt = r.nt;
  out.ni = r.ni;
  out.score = r.score;
  out.ref_template = r.ref_template;
  out.ref_input = r.ref_input;
  out.decision = r.is_match ? frmsm::Decision::Match : frmsm::Decision::NonMatch;
  return out;
}

}  // namespace

extern "C" {

const char* frmsm_last_error(void) { return g_last_error.c_str(); }

const char* frmsm_status_name(frmsm_status status) {
  if (status == FRMSM_OK) return "OK";
  if (status == FRMSM_ERR_INTERNAL) return "Internal";
  if (status < FRMSM_OK || status > FRMSM_ERR_INVALID_ARGUMENT) return "Unknown";
  return frmsm::error_code_name(static_cast<frmsm::ErrorCode>(status - 1));
}

void frmsm_string_free(char* s) { std::free(s); }

frmsm_status frmsm_config_create(frmsm_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new frmsm_config{};
  });
}

void frmsm_config_destroy(frmsm_config* cfg) { delete cfg; }

frmsm_status frmsm_config_set(frmsm_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    frmsm::apply_setting(cfg->value, key, value);
  });
}

frmsm_status frmsm_config_load_file(frmsm_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "config");
    require(path, "path");
    frmsm::load_config_file(cfg->value, path);
  });
}

frmsm_status frmsm_config_validate(const frmsm_config* cfg) {
  return guarded([&] {
    require(cfg, "config");
    frmsm::validate(cfg->value);
  });
}

frmsm_status frmsm_config_get_double(const frmsm_config* cfg, const char* key, double* out) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(out, "out");
    *out = frmsm::config_value(cfg->value, key);
  });
}

frmsm_status frmsm_image_load(const char* path, frmsm_image** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new frmsm_image{frmsm::load_image(path)};
  });
}

frmsm_status frmsm_image_create(int32_t width, int32_t height, frmsm_image_kind kind,
                                const uint8_t* pixels, frmsm_image** out) {
  return guarded([&] {
    require(pixels, "pixels");
    require(out, "out");
    if (width <= 0 || height <= 0) {
      throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, "dimensions must be positive");
    }
    std::vector<std::uint8_t> px(pixels, pixels + static_cast<std::size_t>(width) * height);
    if (kind == FRMSM_IMAGE_BINARY) {
      *out = new frmsm_image{frmsm::BinaryImage(width, height, std::move(px))};
    } else {
      *out = new frmsm_image{frmsm::GrayImage(width, height, std::move(px))};
    }
  });
}

void frmsm_image_destroy(frmsm_image* img) { delete img; }

frmsm_status frmsm_image_info(const frmsm_image* img, int32_t* width, int32_t* height,
                              frmsm_image_kind* kind) {
  return guarded([&] {
    require(img, "image");
    std::visit(
        [&](const auto& im) {
          if (width) *width = im.width();
          if (height) *height = im.height();
        },
        img->value);
    if (kind) {
      *kind = std::holds_alternative<frmsm::GrayImage>(img->value) ? FRMSM_IMAGE_GRAY
                                                                    : FRMSM_IMAGE_BINARY;
    }
  });
}

frmsm_status frmsm_image_pixels(const frmsm_image* img, uint8_t* buf, size_t len) {
  return guarded([&] {
    require(img, "image");
    require(buf, "buffer");
    std::visit(
        [&](const auto& im) {
          if (len < im.pixels().size()) {
            throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, "buffer too small");
          }
          std::memcpy(buf, im.pixels().data(), im.pixels().size());
        },
        img->value);
  });
}

frmsm_status frmsm_image_save(const frmsm_image* img, const char* path) {
  return guarded([&] {
    require(img, "image");
    require(path, "path");
    std::visit([&](const auto& im) { frmsm::save_image(im, path); }, img->value);
  });
}

frmsm_status frmsm_image_to_binary(const frmsm_image* img, frmsm_image** out) {
  return guarded([&] {
    require(img, "image");
    require(out, "out");
    if (const auto* g = std::get_if<frmsm::GrayImage>(&img->value)) {
      *out = new frmsm_image{frmsm::from_gray(*g)};
    } else {
      *out = new frmsm_image{std::get<frmsm::BinaryImage>(img->value)};
    }
  });
}

frmsm_status frmsm_invert(const frmsm_image* binary, frmsm_image** out) {
  return guarded([&] {
    require(out, "out");
    *out = new frmsm_image{frmsm::invert(binary_of(binary))};
  });
}

frmsm_status frmsm_binarize(const frmsm_image* gray, const frmsm_config* cfg, frmsm_image** out) {
  return guarded([&] {
    require(out, "out");
    const auto c = config_of(cfg);
    frmsm::validate(c.pipeline);
    *out = new frmsm_image{frmsm::binarize_stage(gray_of(gray), c.pipeline)};
  });
}

frmsm_status frmsm_whiten_boundary(const frmsm_image* binary, int32_t margin, frmsm_image** out) {
  return guarded([&] {
    require(out, "out");
    *out = new frmsm_image{frmsm::whiten_boundary(binary_of(binary), margin)};
  });
}

frmsm_status frmsm_thin(const frmsm_image* binary, const frmsm_config* cfg, frmsm_image** out) {
  return guarded([&] {
    require(out, "out");
    const auto c = config_of(cfg);
    frmsm::validate(c.pipeline);
    *out = new frmsm_image{frmsm::thin(binary_of(binary), c.pipeline.thin_config())};
  });
}

frmsm_status frmsm_crossing_number(const frmsm_image* skeleton, int32_t row, int32_t col,
                                   int32_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = frmsm::crossing_number(binary_of(skeleton), row, col);
  });
}

frmsm_status frmsm_extract(const frmsm_image* skeleton, const frmsm_config* cfg,
                           frmsm_minutiae** out) {
  return guarded([&] {
    require(out, "out");
    const auto c = config_of(cfg);
    frmsm::validate(c.pipeline);
    *out = new frmsm_minutiae{frmsm::extract(binary_of(skeleton), c.pipeline.extract_config())};
  });
}

frmsm_status frmsm_extract_image(const frmsm_image* gray, const frmsm_config* cfg,
                                 frmsm_minutiae** out) {
  return guarded([&] {
    require(out, "out");
    *out = new frmsm_minutiae{frmsm::extract_minutiae(gray_of(gray), config_of(cfg).pipeline)};
  });
}

frmsm_status frmsm_minutiae_load(const char* path, const frmsm_config* cfg,
                                 frmsm_minutiae** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new frmsm_minutiae{frmsm::load_minutiae(path, config_of(cfg).pipeline)};
  });
}

frmsm_status frmsm_minutiae_load_csv(const char* path, frmsm_minutiae** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new frmsm_minutiae{frmsm::load_csv(path)};
  });
}

frmsm_status frmsm_minutiae_save_csv(const frmsm_minutiae* set, const char* path) {
  return guarded([&] {
    require(set, "minutiae");
    require(path, "path");
    frmsm::save_csv(set->value, path);
  });
}

frmsm_status frmsm_minutiae_to_csv(const frmsm_minutiae* set, char** out) {
  return guarded([&] {
    require(set, "minutiae");
    require(out, "out");
    *out = copy_string(frmsm::format_csv(set->value));
  });
}

frmsm_status frmsm_minutiae_create(const frmsm_minutia* items, size_t count,
                                   frmsm_minutiae** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(items, "items");
    frmsm::MinutiaeSet set;
    std::set<std::pair<int32_t, int32_t>> seen;
    for (size_t i = 0; i < count; ++i) {
      const auto& m = items[i];
      if (m.type != 1 && m.type != 3) {
        throw frmsm::Error(frmsm::ErrorCode::InvalidArgument, "minutia type must be 1 or 3");
      }
      if (m.row < 0 || m.col < 0 || !seen.insert({m.row, m.col}).second) {
        throw frmsm::Error(frmsm::ErrorCode::InvalidArgument,
                           "minutia coordinates must be non-negative and distinct");
      }
      set.minutiae.push_back({m.row, m.col, frmsm::normalize_degrees(m.theta),
                              static_cast<frmsm::MinutiaType>(m.type), false});
    }
    *out = new frmsm_minutiae{std::move(set)};
  });
}

void frmsm_minutiae_destroy(frmsm_minutiae* set) { delete set; }

size_t frmsm_minutiae_count(const frmsm_minutiae* set) { return set ? set->value.size() : 0; }

frmsm_status frmsm_minutiae_get(const frmsm_minutiae* set, size_t index, frmsm_minutia* out) {
  return guarded([&] {
    require(set, "minutiae");
    require(out, "out");
    if (index >= set->value.size()) {
      throw frmsm::Error(frmsm::ErrorCode::BadIndex, "minutia index out of range");
    }
    const auto& m = set->value[index];
    *out = {m.row, m.col, m.theta, static_cast<int32_t>(m.type)};
  });
}

frmsm_status frmsm_render_overlay(const frmsm_image* gray, const frmsm_minutiae* set,
                                  const char* path) {
  return guarded([&] {
    require(set, "minutiae");
    require(path, "path");
    frmsm::render_overlay(gray_of(gray), set->value, path);
  });
}

frmsm_status frmsm_match(const frmsm_minutiae* tpl, const frmsm_minutiae* input,
                         const frmsm_config* cfg, frmsm_match_result* out) {
  return guarded([&] {
    require(tpl, "template");
    require(input, "input");
    require(out, "out");
    const auto r = frmsm::match(tpl->value, input->value, config_of(cfg).match);
    *out = {r.matched,      r.nt,         r.ni, r.score, r.ref_template,
            r.ref_input,    r.decision == frmsm::Decision::Match ? 1 : 0};
  });
}

frmsm_status frmsm_match_result_json(const frmsm_match_result* result, char** out) {
  return guarded([&] {
    require(result, "result");
    require(out, "out");
    *out = copy_string(frmsm::to_json(to_cpp(*result)));
  });
}

frmsm_status frmsm_evaluate(const char* manifest_path, const frmsm_config* cfg,
                            frmsm_evaluation** out) {
  return guarded([&] {
    require(manifest_path, "manifest path");
    require(out, "out");
    const auto c = config_of(cfg);
    frmsm::validate(c);
    const auto manifest = frmsm::load_manifest(manifest_path);
    frmsm::MinutiaeCache cache(c.pipeline);
    *out = new frmsm_evaluation{frmsm::score_all(manifest, c.match, cache)};
  });
}

void frmsm_evaluation_destroy(frmsm_evaluation* eval) { delete eval; }

frmsm_status frmsm_evaluation_rates(const frmsm_evaluation* eval, double threshold, double* fmr,
                                    double* fnmr) {
  return guarded([&] {
    require(eval, "evaluation");
    const auto r = frmsm::summarize(eval->attempts, threshold);
    if (fmr) *fmr = r.fmr;
    if (fnmr) *fnmr = r.fnmr;
  });
}

frmsm_status frmsm_evaluation_report_json(const frmsm_evaluation* eval, double threshold,
                                          char** out) {
  return guarded([&] {
    require(eval, "evaluation");
    require(out, "out");
    *out = copy_string(frmsm::to_json(frmsm::summarize(eval->attempts, threshold)));
  });
}

frmsm_status frmsm_evaluation_attempts_csv(const frmsm_evaluation* eval, double threshold,
                                           char** out) {
  return guarded([&] {
    require(eval, "evaluation");
    require(out, "out");
    *out = copy_string(frmsm::attempts_csv(frmsm::summarize(eval->attempts, threshold)));
  });
}

frmsm_status frmsm_evaluation_sweep_csv(const frmsm_evaluation* eval, double start, double stop,
                                        double step, char** out) {
  return guarded([&] {
    require(eval, "evaluation");
    require(out, "out");
    *out = copy_string(frmsm::sweep_csv(frmsm::sweep(eval->attempts, start, stop, step)));
  });
}

}  // extern "C"
