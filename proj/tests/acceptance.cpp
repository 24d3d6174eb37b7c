// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "vidtone/ecb.hpp"
#include "vidtone/fusion.hpp"
#include "vidtone/hem.hpp"
#include "vidtone/io.hpp"
#include "vidtone/metrics.hpp"
#include "vidtone/pipeline.hpp"
#include "vidtone/sidecar.hpp"
#include "vidtone/synth.hpp"

namespace fs = std::filesystem;
using namespace vidtone;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

roi::RoiStats random_stats(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> m(0.0, 255.0), s(0.5, 50.0);
  roi::RoiStats r;
  for (int c = 0; c < 3; ++c) {
    r.mean[c] = m(rng);
    r.stddev[c] = s(rng);
  }
  r.pixel_count = 100;
  return r;
}

Outcome he_equivalence() {
  std::mt19937_64 rng(101);
  std::vector<Frame> frames;
  for (int i = 0; i < 50; ++i) frames.push_back(oracle::random_frame(rng, 64, 64));
  Params p;
  p.lambda = 0.0;
  const auto t0 = Clock::now();
  const auto out = pipeline::enhance_sequence(frames, pipeline::RoiSchedule(frames.size()),
                                              pipeline::Mode::hem_only, p);
  const double elapsed = seconds_since(t0);
  int mismatches = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) mismatches += out.frames[i] != oracle::classic_he(frames[i]);
  return {mismatches == 0 && elapsed < 5.0,
          fmt("%d/50 frames differ from classic HE, %.3f s (limit 5 s)", mismatches, elapsed)};
}

Outcome histogram_optimality() {
  std::mt19937_64 rng(202);
  const double lambda = 2.0, gamma = 3.0;
  int violations = 0;
  double worst = -INFINITY;
  const std::array<double, 4> scales{1e-2, 1e-3, 1e-4, 1e-6};
  for (int i = 0; i < 100; ++i) {
    const Histogram e = oracle::random_histogram(rng, 0.3);
    const Histogram prev = oracle::random_histogram(rng, 0.3);
    const auto t = hem::temporal_modified_histogram(e, prev, lambda, gamma);
    const double best = oracle::temporal_objective(t.h.bins, e, prev, lambda, gamma);
    for (int k = 0; k < 10000; ++k) {
      const auto cand = oracle::perturb_on_simplex(t.h.bins, rng, scales[k % scales.size()]);
      const double margin = best - oracle::temporal_objective(cand, e, prev, lambda, gamma);
      worst = std::max(worst, margin);
      violations += margin > 1e-9;
    }
  }
  return {violations == 0,
          fmt("%d of 1e6 candidates beat the closed form by > 1e-9 (largest margin %.3g)", violations, worst)};
}

Outcome monotonicity_sweep() {
  std::mt19937_64 rng(303);
  const Params p;
  int counts[2] = {0, 0}, violations = 0;
  while (counts[0] < 1000 || counts[1] < 1000) {
    const auto a = random_stats(rng), b = random_stats(rng);
    const auto [f, d] = fusion::fuse_pair(fusion::local_curve(a, Channel::R, p).curve, a,
                                          fusion::local_curve(b, Channel::R, p).curve, b, Channel::R, p);
    int& n = counts[d.strategy == fusion::Strategy::piecewise ? 0 : 1];
    if (n >= 1000) continue;
    ++n;
    violations += !(f.is_monotone() && f.in_range());
  }
  return {violations == 0, fmt("1000 piecewise + 1000 factor curves, %d violations", violations)};
}

Outcome anchor_interpolation() {
  const Params p;
  roi::RoiStats a, b;
  a.mean.fill(50);
  a.stddev.fill(10);
  b.mean.fill(180);
  b.stddev.fill(10);
  a.pixel_count = b.pixel_count = 100;
  const auto sep = roi::separability(a, b, p.alpha);
  const double pc = fusion::conjunctive_point(a, b, sep, Channel::R, p);
  const bool example_ok = pc == 115.0;

  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0, pc_mismatch = 0;
  double worst = 0.0;
  while (checked < 500) {
    roi::RoiStats s1, s2;
    s1.mean.fill(255 * u(rng));
    s1.stddev.fill(1 + 20 * u(rng));
    s2.mean.fill(255 * u(rng));
    s2.stddev.fill(1 + 20 * u(rng));
    s1.pixel_count = s2.pixel_count = 100;
    const auto d = fusion::select_strategy(s1, s2, Channel::R, p);
    if (d.strategy != fusion::Strategy::piecewise) continue;
    ++checked;
    const auto& lo = s1.mean[0] <= s2.mean[0] ? s1 : s2;
    const auto& hi = s1.mean[0] <= s2.mean[0] ? s2 : s1;

    // Direct two-branch evaluation of the conjunctive point.
    const auto sp = roi::separability(lo, hi, p.alpha);
    const double na = sp[Channel::R].n_a, nb = sp[Channel::R].n_b;
    const double ma = lo.mean[0], sa = lo.stddev[0], mb = hi.mean[0], sb = hi.stddev[0], al = p.alpha;
    double direct = na >= nb ? ((ma + al * sa) + (mb - al * sb + (na - nb) * sa)) / 2
                             : ((ma + al * sa - (nb - na) * sb) + (mb - al * sb)) / 2;
    const double lo_b = std::max(ma - al * sa, 1.0), hi_b = std::min(mb + al * sb, 254.0);
    direct = hi_b - lo_b > 1.0 ? std::clamp(direct, lo_b + 0.5, hi_b - 0.5) : 0.5 * (lo_b + hi_b);
    pc_mismatch += *d.conjunctive_point != direct;

    const ToneCurve fa = fusion::local_curve(lo, Channel::R, p).curve;
    const ToneCurve fb = fusion::local_curve(hi, Channel::R, p).curve;
    const double c = *d.conjunctive_point;
    const auto shape = fusion::piecewise_shape(fa, fb, lo, hi, c, Channel::R, p);
    const ToneCurve lut = fusion::piecewise_curve(fa, fb, lo, hi, c, Channel::R, p);
    const double x1 = std::clamp(ma - al * sa, 1.0, 254.0), x2 = std::clamp(mb + al * sb, 1.0, 254.0);
    worst = std::max({worst, std::abs(shape(x1) - (p.k1 * fa.eval(x1) + (1 - p.k1) * fb.eval(x1))),
                      std::abs(shape(c) - (p.k2 * fa.eval(c) + (1 - p.k2) * fb.eval(c))),
                      std::abs(shape(x2) - (p.k1 * fb.eval(x2) + (1 - p.k1) * fa.eval(x2)))});
    for (int x = 0; x < 256; ++x) worst = std::max(worst, std::abs(lut.lut[x] - std::clamp(shape(x), 0.0, 255.0)));
  }
  return {example_ok && pc_mismatch == 0 && worst <= 0.5,
          fmt("P_c example = %.6g (want 115), %d/500 P_c mismatches, worst anchor error %.3g levels",
              pc, pc_mismatch, worst)};
}

Outcome factor_closed_form() {
  std::mt19937_64 rng(505);
  const Params p;
  const Channel c = Channel::G;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto s1 = random_stats(rng), s2 = random_stats(rng);
    const auto& a = s1.mean_of(c) <= s2.mean_of(c) ? s1 : s2;
    const auto& b = s1.mean_of(c) <= s2.mean_of(c) ? s2 : s1;
    const ToneCurve fa = fusion::local_curve(a, c, p).curve, fb = fusion::local_curve(b, c, p).curve;
    auto objective = [&](double l) {
      double j = 0;
      for (const auto* s : {&a, &b}) {
        const ToneCurve& own = s == &a ? fa : fb;
        const int lo = int(std::ceil(std::max(0.0, s->mean_of(c) - p.alpha * s->sigma_of(c))));
        const int hi = int(std::floor(std::min(255.0, s->mean_of(c) + p.alpha * s->sigma_of(c))));
        for (int x = lo; x <= hi; ++x) {
          const double d = l * fa.lut[x] + (1 - l) * fb.lut[x] - own.lut[x];
          j += d * d;
        }
      }
      return j;
    };
    double best = 0, best_j = objective(0);
    for (int k = 1; k <= 1000; ++k)
      if (const double j = objective(k / 1000.0); j < best_j) best_j = j, best = k / 1000.0;
    worst = std::max(worst, std::abs(fusion::factor_lambda(fa, fb, a, b, c, p) - best));
  }
  return {worst <= 0.001, fmt("200 pairs, worst |closed form - grid| = %.2g (limit 0.001)", worst)};
}

Outcome lambda_bound() {
  std::mt19937_64 rng(606);
  const Params p;
  int out_of_range = 0, not_minimal = 0;
  for (int i = 0; i < 100; ++i) {
    const Frame f0 = oracle::random_frame(rng, 32, 24), f1 = oracle::random_frame(rng, 32, 24);
    const auto c0 = fusion::fuse_global(f0, {}, p).curves;
    const auto c1 = fusion::fuse_global(f1, {}, p).curves;
    const auto st = ecb::ecb_step(f0, c0, {}, p).state;
    const auto s = ecb::search_lambda_ea(f1, c1, st, p);
    out_of_range += !(s.selected >= 0.5 && s.selected <= 1.0) || s.selected != ecb::select_lambda_ea(f1, c1, st, p);
    const auto table = ecb::color_table(f1);
    for (int k = 0; k <= 100; ++k) {
      const double e = ecb::enhanced_entropy(table, ecb::blend_curves(c1, c0, k / 100.0), p.entropy_base);
      if (std::abs(e - *st.prev_entropy) < s.gap - 1e-12) {
        ++not_minimal;
        break;
      }
    }
  }
  return {out_of_range == 0 && not_minimal == 0,
          fmt("100 pairs: %d outside [0.5, 1], %d with a smaller gap elsewhere on the grid", out_of_range,
              not_minimal)};
}

Outcome flicker_reduction() {
  const auto t0 = Clock::now();
  const auto seq = synth::generate(synth::SynthSpec{});
  const pipeline::RoiSchedule none(seq.frames.size());
  const auto hem = pipeline::enhance_sequence(seq.frames, none, pipeline::Mode::hem_only, Params{});
  const auto ecb = pipeline::enhance_sequence(seq.frames, none, pipeline::Mode::ecb_only_histogram, Params{});
  const double elapsed = seconds_since(t0);
  const auto th = metrics::metric_TAMBE(hem.frames), te = metrics::metric_TAMBE(ecb.frames);
  const double hh = metrics::metric_HIBTE(hem.frames), he = metrics::metric_HIBTE(ecb.frames);
  return {te.mu <= 0.7 * th.mu && he <= hh && elapsed < 30.0,
          fmt("TAMBE(mu) ECB %.3f vs 0.7 x HEM %.3f; HIBTE ECB %.4f vs HEM %.4f; %.2f s", te.mu, 0.7 * th.mu,
              he, hh, elapsed)};
}

Outcome entropy_gain() {
  int passing = 0;
  double min_gain = INFINITY;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    synth::SynthSpec s;
    s.kind = synth::Kind::two_roi_scene;
    s.seed = seed;
    s.frames = 4;
    const auto seq = synth::generate(s);
    const auto out = pipeline::enhance_sequence(seq.frames, pipeline::RoiSchedule(seq.frames.size(), seq.rois),
                                                pipeline::Mode::acb_only, Params{});
    const double gain = metrics::metric_H(out.frames) - metrics::metric_H(seq.frames);
    min_gain = std::min(min_gain, gain);
    passing += gain >= 0.2;
  }
  return {passing >= 18, fmt("%d/20 seeds gain >= 0.2 bits (need 18), smallest gain %.3f", passing, min_gain)};
}

Outcome static_fixed_point() {
  synth::SynthSpec s;
  s.amplitude = 0.0;
  s.frames = 10;
  const auto seq = synth::generate(s);
  const auto out = pipeline::enhance_sequence(seq.frames, pipeline::RoiSchedule(seq.frames.size(), seq.rois),
                                              pipeline::Mode::full_aecb, Params{});
  int differing = 0;
  for (const auto& f : out.frames) differing += f != out.frames[0];
  const auto r = metrics::report(out.frames);
  return {differing == 0 && r.TAMBE_mu == 0.0 && r.TAMBE_sigma == 0.0 && r.HIBTE == 0.0,
          fmt("%d frames differ from frame 0; TAMBE %.3g/%.3g, HIBTE %.3g", differing, r.TAMBE_mu, r.TAMBE_sigma,
              r.HIBTE)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("vidtone_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  synth::SynthSpec s;
  s.frames = 8;
  const auto seq = synth::generate(s);
  io::store_frames(root / "in", seq.frames, io::ImageFormat::png);
  sidecar::RoiSidecar sc;
  sc.defaults = seq.rois;
  pipeline::write_text(root / "in" / "rois.json", sidecar::to_text(sc));

  int files = 0, differing = 0;
  for (auto mode : {pipeline::Mode::hem_only, pipeline::Mode::ecb_only_histogram, pipeline::Mode::acb_only,
                    pipeline::Mode::full_aecb}) {
    for (const char* run : {"a", "b"}) {
      pipeline::Job job;
      job.input = root / "in";
      job.sidecar = root / "in" / "rois.json";
      job.mode = mode;
      const fs::path out = root / run / pipeline::to_string(mode);
      job.output = out / "frames";
      job.curve_dir = out / "curves";
      job.report_path = out / "report.json";
      pipeline::run(job);
    }
  }
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    differing += slurp(e.path()) != slurp(root / "b" / fs::relative(e.path(), root / "a"));
  }
  fs::remove_all(root);
  return {files > 0 && differing == 0, fmt("%d artifacts over 4 modes, %d differ between runs", files, differing)};
}

}  // namespace

int main() {
  ::setenv("VIDTONE_LOG", "quiet", 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"HE equivalence", he_equivalence},
      {"temporal histogram optimality", histogram_optimality},
      {"fused curve monotonicity", monotonicity_sweep},
      {"piecewise anchors and conjunctive point", anchor_interpolation},
      {"factor weight closed form", factor_closed_form},
      {"temporal weight lower bound", lambda_bound},
      {"flicker reduction", flicker_reduction},
      {"intra-frame entropy gain", entropy_gain},
      {"static-sequence fixed point", static_fixed_point},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
