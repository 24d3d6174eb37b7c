#pragma once

// End-to-end sequence enhancement: per-frame curves from one of four
// configurations, applied in frame order with the temporal state threaded
// through.
//
//   hem   per-channel HEM curves, no temporal term
//   ecb   HEM with the previous-frame histogram term (histogram mode)
//   acb   ROI-fused global curves only
//   aecb  ROI-fused curves, then entropy-matched blending (curve mode)

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vidtone/config.hpp"
#include "vidtone/core.hpp"
#include "vidtone/ecb.hpp"
#include "vidtone/fusion.hpp"
#include "vidtone/hem.hpp"
#include "vidtone/io.hpp"
#include "vidtone/metrics.hpp"
#include "vidtone/params.hpp"
#include "vidtone/sidecar.hpp"

namespace vidtone::pipeline {

namespace fs = std::filesystem;

enum class Mode { hem_only, ecb_only_histogram, acb_only, full_aecb };

inline Mode parse_mode(const std::string& s) {
  if (s == "hem" || s == "hem_only") return Mode::hem_only;
  if (s == "ecb" || s == "ecb_only_histogram") return Mode::ecb_only_histogram;
  if (s == "acb" || s == "acb_only") return Mode::acb_only;
  if (s == "aecb" || s == "full_aecb") return Mode::full_aecb;
  throw Error(ErrorKind::input, "unknown mode '" + s + "' (expected hem|ecb|acb|aecb)");
}

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::hem_only: return "hem";
    case Mode::ecb_only_histogram: return "ecb";
    case Mode::acb_only: return "acb";
    case Mode::full_aecb: return "aecb";
  }
  return "?";
}

inline bool uses_rois(Mode m) { return m == Mode::acb_only || m == Mode::full_aecb; }

enum class LogLevel { quiet, info, debug };

// VIDTONE_LOG=quiet|info|debug; info when unset.
inline LogLevel log_level() {
  const char* v = std::getenv("VIDTONE_LOG");
  if (!v) return LogLevel::info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::quiet;
  if (s == "debug" || s == "2") return LogLevel::debug;
  return LogLevel::info;
}

inline void log_message(LogLevel level, const std::string& msg) {
  if (level != LogLevel::quiet && static_cast<int>(level) <= static_cast<int>(log_level()))
    std::cerr << "[vidtone] " << msg << '\n';
}

struct FrameTrace {
  CurveSet curves;
  double lambda_ea = 0.0;
  std::vector<fusion::DecisionSet> decisions;
};

struct Enhanced {
  std::vector<Frame> frames;
  std::vector<FrameTrace> trace;
};

// Per-frame ROI lists; an empty list means "whole frame".
using RoiSchedule = std::vector<std::vector<RoiBox>>;

inline RoiSchedule schedule_from(const sidecar::RoiSidecar& s, std::size_t frames) {
  RoiSchedule out(frames);
  for (std::size_t i = 0; i < frames; ++i) out[i] = s.boxes_for(i);
  return out;
}

inline Enhanced enhance_sequence(std::span<const Frame> frames, const RoiSchedule& rois, Mode mode,
                                 Params params) {
  params.validate();
  if (frames.empty()) throw Error(ErrorKind::input, "no input frames");
  if (uses_rois(mode) && rois.size() != frames.size())
    throw Error(ErrorKind::input, "ROI schedule length does not match the frame count");
  if (mode == Mode::ecb_only_histogram) params.ecb_mode = EcbMode::histogram;
  if (mode == Mode::full_aecb) params.ecb_mode = EcbMode::curve;

  Enhanced out;
  ecb::EnhancerState state;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Frame& frame = frames[t];
    FrameTrace trace;
    switch (mode) {
      case Mode::hem_only:
        trace.curves = hem::hem_curves(frame, params.lambda);
        break;
      case Mode::ecb_only_histogram: {
        auto step = ecb::ecb_step(frame, hem::hem_curves(frame, params.lambda), state, params);
        trace.curves = step.curves;
        state = std::move(step.state);
        break;
      }
      case Mode::acb_only:
      case Mode::full_aecb: {
        auto fused = fusion::fuse_global(frame, rois[t], params);
        trace.decisions = std::move(fused.steps);
        trace.curves = fused.curves;
        if (mode == Mode::full_aecb) {
          auto step = ecb::ecb_step(frame, fused.curves, state, params);
          trace.curves = step.curves;
          trace.lambda_ea = step.lambda_ea;
          state = std::move(step.state);
        }
        break;
      }
    }
    out.frames.push_back(apply_curve(frame, trace.curves));
    out.trace.push_back(std::move(trace));
  }
  return out;
}

// One line per level: x<TAB>R<TAB>G<TAB>B, three decimals.
inline std::string curve_dump(const CurveSet& curves) {
  std::string s;
  char line[96];
  for (int x = 0; x < kLevels; ++x) {
    std::snprintf(line, sizeof line, "%d\t%.3f\t%.3f\t%.3f\n", x, curves[0].lut[x],
                  curves[1].lut[x], curves[2].lut[x]);
    s += line;
  }
  return s;
}

inline std::string curve_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "curves_%06zu.tsv", index);
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

struct Job {
  fs::path input;
  std::optional<fs::path> output;       // frames are not written when absent
  std::optional<fs::path> sidecar;
  Params params;
  Mode mode = Mode::full_aecb;
  std::optional<fs::path> curve_dir;
  std::optional<fs::path> report_path;  // output-sequence report, JSON
};

struct RunResult {
  Enhanced enhanced;
  metrics::SequenceReport input_report;
  metrics::SequenceReport output_report;
  bool has_report = false;
};

inline RunResult run(const Job& job) {
  job.params.validate();
  const io::FrameSequence seq = io::load_frames(job.input);
  const Frame& first = seq.frames.front();
  log_message(LogLevel::info, "loaded " + std::to_string(seq.frames.size()) + " frames (" +
                          std::to_string(first.width()) + "x" + std::to_string(first.height()) +
                          ") from " + job.input.string());

  RoiSchedule rois(seq.frames.size());
  if (uses_rois(job.mode)) {
    if (!job.sidecar)
      throw Error(ErrorKind::input, std::string("mode ") + to_string(job.mode) +
                                        " needs an ROI sidecar (--rois)");
    const auto sc = sidecar::load_sidecar(*job.sidecar);
    sidecar::validate(sc, first.width(), first.height(), seq.frames.size());
    rois = schedule_from(sc, seq.frames.size());
  }

  RunResult result;
  result.enhanced = enhance_sequence(seq.frames, rois, job.mode, job.params);

  if (job.output) {
    io::store_frames(*job.output, result.enhanced.frames, seq.format, seq.first_index);
    log_message(LogLevel::info, "wrote frames to " + job.output->string());
  }
  if (job.curve_dir) {
    for (std::size_t i = 0; i < result.enhanced.trace.size(); ++i)
      write_text(*job.curve_dir / curve_filename(seq.first_index + i),
                 curve_dump(result.enhanced.trace[i].curves));
  }
  for (std::size_t i = 0; i < result.enhanced.trace.size(); ++i) {
    const auto& tr = result.enhanced.trace[i];
    std::string msg = "frame " + std::to_string(seq.first_index + i);
    if (job.mode == Mode::full_aecb) msg += " lambda_ea=" + std::to_string(tr.lambda_ea);
    for (const auto& step : tr.decisions)
      for (Channel c : kChannels)
        msg += std::string(" ") + vidtone::to_string(c) + ":" +
               fusion::to_string(step[index(c)].strategy);
    log_message(LogLevel::debug, msg);
  }
  if (job.report_path) {
    result.input_report = metrics::report(seq.frames, job.params.entropy_base);
    result.output_report = metrics::report(result.enhanced.frames, job.params.entropy_base);
    result.has_report = true;
    write_text(*job.report_path, metrics::to_json(result.output_report).dump(2) + "\n");
  }
  return result;
}

}  // namespace vidtone::pipeline
