// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances and time limits are fixed here.
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "frmsm/angles.hpp"
#include "frmsm/evaluation.hpp"
#include "frmsm/matcher.hpp"
#include "frmsm/minutiae.hpp"
#include "frmsm/preprocess.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace frmsm;
namespace ft = frmsm::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = untimed
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome crossing_number_oracle() {
  int agree = 0;
  for (unsigned code = 0; code < 256; ++code) {
    BinaryImage img(3, 3);
    img.set(1, 1, 1);
    std::array<int, 8> ring{};
    for (int i = 0; i < 8; ++i) {
      ring[i] = (code >> i) & 1u;
      img.set(1 + detail::kRingRow[i], 1 + detail::kRingCol[i], ring[i]);
    }
    agree += crossing_number(img, 1, 1) == ft::crossing_number_half_sum(ring);
  }
  return {agree == 256, fmt("%d/256 neighbourhoods agree with the half-sum", agree)};
}

Outcome thinning_invariants() {
  constexpr int kBlobs = 200;
  std::mt19937_64 rng(20240601);
  int block = 0, subset = 0, components = 0, idempotent = 0;
  for (int i = 0; i < kBlobs; ++i) {
    const BinaryImage img = ft::random_blobs(rng, 64, 64);
    // Thinning clears the boundary frame first; topology is compared against
    // the raster it actually thins.
    const BinaryImage reference = whiten_boundary(img, ThinConfig{}.boundary_margin);
    const BinaryImage skel = thin(img);
    block += ft::has_ridge_block(skel);
    subset += !ft::is_subset(skel, img);
    components += ft::count_components8(skel) != ft::count_components8(reference);
    idempotent += !(thin(skel) == skel);
  }
  const bool ok = block == 0 && subset == 0 && components == 0 && idempotent == 0;
  return {ok, fmt("%d blobs; violations: 2x2 block %d, subset %d, components %d, idempotence %d",
                  kBlobs, block, subset, components, idempotent)};
}

Outcome pairing_oracle() {
  constexpr int kInstances = 500;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 6), coin(0, 1), pick(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Spreads from crowded (every point competes) to sparse.
  constexpr double kSpreads[] = {6.0, 12.0, 20.0, 40.0};
  const MatchConfig cfg;
  int equal = 0, worse_by_more = 0, worst_gap = 0;
  for (int n = 0; n < kInstances; ++n) {
    const double spread = kSpreads[pick(rng)];
    const auto point = [&] {
      return PolarMinutia{spread * unit(rng), 1.5 * spread * unit(rng), 1.5 * spread * unit(rng)};
    };
    const auto type = [&] { return coin(rng) ? MinutiaType::Termination : MinutiaType::Bifurcation; };
    std::vector<PolarMinutia> tpl, inp;
    std::vector<MinutiaType> tt, it;
    const int nt = size(rng), ni = size(rng);
    for (int i = 0; i < nt; ++i) {
      tpl.push_back(point());
      tt.push_back(type());
    }
    for (int i = 0; i < ni; ++i) {
      inp.push_back(point());
      it.push_back(type());
    }
    const auto greedy = static_cast<int>(count_matches(tpl, inp, tt, it, cfg));
    const auto best = static_cast<int>(ft::optimal_pairing(
        tpl, inp, tt, it, {cfg.r_tol, cfg.phi_tol, cfg.theta_tol, cfg.require_same_type}));
    equal += greedy == best;
    worse_by_more += greedy < best - 1;
    worst_gap = std::max(worst_gap, best - greedy);
  }
  const double equal_rate = static_cast<double>(equal) / kInstances;
  return {worse_by_more == 0 && equal_rate >= 0.90,
          fmt("%d instances; greedy == optimal on %.1f%% (need >= 90%%), largest shortfall %d "
              "(allowed 1)",
              kInstances, 100.0 * equal_rate, worst_gap)};
}

Outcome rigid_motion() {
  constexpr int kSets = 50;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(5, 30), shift(-60, 60);
  const MatchConfig cfg{2.0, 3.0, 3.0, true, 0.3};
  int cases = 0, perfect = 0;
  double lowest = 1.0;
  for (int s = 0; s < kSets; ++s) {
    // Points at least 30 px apart keep pixel rounding of rotated positions
    // within r_tol and phi_tol.
    const MinutiaeSet set = ft::random_minutiae(rng, count(rng), 400, 400, 30.0);
    for (int alpha = 0; alpha < 360; alpha += 10) {
      const MinutiaeSet moved = ft::rigid_transform(set, alpha, 200, 200, shift(rng), shift(rng));
      const double score = match(set, moved, cfg).score;
      ++cases;
      perfect += score == 1.0;
      lowest = std::min(lowest, score);
    }
  }
  return {perfect == cases,
          fmt("%d sets x 36 rotations: %d/%d score 1.0 (lowest %.3f)", kSets, perfect, cases, lowest)};
}

Outcome score_arithmetic() {
  bool ok = score_of(8, 10, 8) == 0.8;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> count(1, 15);
  int in_bounds = 0, self_one = 0;
  for (int i = 0; i < 1000; ++i) {
    const MinutiaeSet a = ft::random_minutiae(rng, count(rng), 100, 100, 1.0);
    const MinutiaeSet b = ft::random_minutiae(rng, count(rng), 100, 100, 1.0);
    const double s = match(a, b).score;
    in_bounds += s >= 0.0 && s <= 1.0;
    self_one += match(a, a).score == 1.0;
  }
  ok = ok && in_bounds == 1000 && self_one == 1000;
  return {ok, fmt("score(8,10,8) = %.17g; self-match 1.0 on %d/1000; score in [0,1] on %d/1000",
                  score_of(8, 10, 8), self_one, in_bounds)};
}

// Ten identities, two impressions each; the second impression moves 20% of
// the minutiae by up to 3 px.
std::filesystem::path write_protocol_dataset(const ft::TempDir& dir) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(20, 40);
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < 10; ++i) {
    const std::string id = fmt("id%02d", i);
    const MinutiaeSet first = ft::random_minutiae(rng, count(rng), 300, 300, 12.0);
    save_csv(first, dir / (id + "_1.csv"));
    save_csv(ft::jitter(first, rng, 0.2, 3), dir / (id + "_2.csv"));
    entries.push_back({{"id", id}, {"template", id + "_1.csv"}, {"inputs", {id + "_2.csv"}}});
  }
  ft::write_file(dir / "manifest.json", nlohmann::json{{"entries", entries}}.dump());
  return dir / "manifest.json";
}

Outcome protocol() {
  ft::TempDir dir;
  const EvalReport report =
      evaluate(load_manifest(write_protocol_dataset(dir)), MatchConfig{}, PipelineConfig{});

  std::vector<Attempt> counted;
  for (int i = 0; i < 500; ++i) {
    Attempt a;
    a.kind = AttemptKind::Imposter;
    a.score = i < 13 ? 1.0 : 0.0;
    counted.push_back(a);
  }
  const double fmr_13_500 = summarize(counted, 0.3).fmr;

  const bool ok = report.fnmr == 0.0 && report.imposter_attempts == 90 &&
                  report.enrollee_attempts == 10 && report.fmr <= 0.05 && fmr_13_500 == 0.026;
  return {ok, fmt("FNMR %.2f (need 0.00), imposter attempts %zu (need 90), FMR %.4f (need <= 0.05), "
                  "13/500 -> %.3f",
                  report.fnmr, report.imposter_attempts, report.fmr, fmr_13_500)};
}

Outcome monotone_sweep() {
  ft::TempDir dir;
  MinutiaeCache cache{PipelineConfig{}};
  const auto attempts =
      score_all(load_manifest(write_protocol_dataset(dir)), MatchConfig{}, cache);
  const auto points = sweep(attempts, 0.0, 1.0, 0.05);
  int breaks = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    breaks += points[i].fmr > points[i - 1].fmr;
    breaks += points[i].fnmr < points[i - 1].fnmr;
  }
  return {points.size() == 21 && breaks == 0,
          fmt("%zu thresholds, %d monotonicity breaks; FMR %.3f -> %.3f, FNMR %.3f -> %.3f",
              points.size(), breaks, points.front().fmr, points.back().fmr, points.front().fnmr,
              points.back().fnmr)};
}

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + FRMSM_CLI_PATH + "' " + args + " 2>/dev/null";
  CliRun run;
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return run;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), n);
  const int status = pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

Outcome pipeline_composition() {
  ft::TempDir dir;
  const auto q = [](const std::filesystem::path& p) { return "'" + p.string() + "'"; };
  constexpr int kPrints = 10;
  for (int i = 0; i < kPrints; ++i) {
    save_image(ft::synth_fingerprint(static_cast<std::uint64_t>(100 + i)), dir / fmt("f%d.pgm", i));
    if (run_cli("extract " + q(dir / fmt("f%d.pgm", i)) + " " + q(dir / fmt("f%d.csv", i)))
            .exit_code != 0) {
      return {false, fmt("extract failed on print %d", i)};
    }
  }
  int identical = 0, compared = 0;
  for (int i = 0; i < kPrints; ++i) {
    for (int j : {i, (i + 1) % kPrints}) {
      const CliRun images =
          run_cli("match " + q(dir / fmt("f%d.pgm", i)) + " " + q(dir / fmt("f%d.pgm", j)));
      const CliRun csvs =
          run_cli("match " + q(dir / fmt("f%d.csv", i)) + " " + q(dir / fmt("f%d.csv", j)));
      ++compared;
      identical += images.exit_code != 2 && images.out == csvs.out &&
                   images.exit_code == csvs.exit_code && !images.out.empty();
    }
  }
  return {identical == compared,
          fmt("%d/%d image-vs-CSV match outputs byte-identical over %d prints", identical, compared,
              kPrints)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "crossing number equals the half-sum oracle", 1.0, crossing_number_oracle},
      {2, "thinning invariants on random blobs", 10.0, thinning_invariants},
      {3, "greedy pairing against optimal assignment", 10.0, pairing_oracle},
      {4, "rigid-motion invariance of the match score", 30.0, rigid_motion},
      {5, "score arithmetic and bounds", 0.0, score_arithmetic},
      {6, "FMR/FNMR protocol on a synthetic dataset", 60.0, protocol},
      {7, "threshold sweep monotonicity", 0.0, monotone_sweep},
      {8, "extract + match on CSVs equals match on images", 0.0, pipeline_composition},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(", limit %.0f s", c.time_limit_s);
      if (secs > c.time_limit_s) {
        o.pass = false;
        o.detail += "; over time limit";
      }
    }
    failed += !o.pass;
    std::printf("%s  criterion %d: %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
