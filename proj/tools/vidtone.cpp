// Command-line front end: enhance | curve | metrics | synth.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vidtone/config.hpp"
#include "vidtone/io.hpp"
#include "vidtone/metrics.hpp"
#include "vidtone/pipeline.hpp"
#include "vidtone/sidecar.hpp"
#include "vidtone/synth.hpp"

namespace fs = std::filesystem;
using namespace vidtone;

namespace {

struct JobOptions {
  std::string in, out, rois, mode = "aecb", config, dump_curves, report;
  std::vector<std::string> sets;
};

void add_job_options(CLI::App* cmd, JobOptions& o, bool with_output) {
  cmd->add_option("--in", o.in, "Directory of frame_NNNNNN.{png,ppm} files")->required();
  if (with_output) cmd->add_option("--out", o.out, "Output frame directory")->required();
  cmd->add_option("--rois", o.rois, "ROI sidecar (JSON); required for acb and aecb");
  cmd->add_option("--mode", o.mode, "hem | ecb | acb | aecb")
      ->check(CLI::IsMember({"hem", "ecb", "acb", "aecb"}));
  cmd->add_option("--config", o.config, "key=value parameter file");
  cmd->add_option("--set", o.sets, "Parameter override key=value (repeatable)");
}

pipeline::Job make_job(const JobOptions& o) {
  pipeline::Job job;
  job.input = o.in;
  if (!o.out.empty()) job.output = fs::path(o.out);
  if (!o.rois.empty()) job.sidecar = fs::path(o.rois);
  job.mode = pipeline::parse_mode(o.mode);
  if (!o.config.empty()) job.params = config::load_config(o.config);
  for (const auto& s : o.sets) config::apply_assignment(job.params, s);
  job.params.validate();
  if (!o.dump_curves.empty()) job.curve_dir = fs::path(o.dump_curves);
  if (!o.report.empty()) job.report_path = fs::path(o.report);
  return job;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-sequence tone-curve enhancer with ROI fusion and temporal constraints"};
  app.require_subcommand(1);

  JobOptions enhance_opts;
  auto* enhance = app.add_subcommand("enhance", "Enhance a frame sequence");
  add_job_options(enhance, enhance_opts, true);
  enhance->add_option("--dump-curves", enhance_opts.dump_curves, "Write per-frame curve TSVs here");
  enhance->add_option("--report", enhance_opts.report, "Write the output-sequence metrics (JSON)");

  JobOptions curve_opts;
  auto* curve = app.add_subcommand("curve", "Dump per-frame curves without writing frames");
  add_job_options(curve, curve_opts, false);
  curve->add_option("--out", curve_opts.dump_curves, "Curve output directory")->required();

  std::string metrics_in, metrics_json;
  double metrics_base = 2.0;
  auto* metrics_cmd = app.add_subcommand("metrics", "Report H, TAMBE and HIBTE for a sequence");
  metrics_cmd->add_option("--in", metrics_in, "Frame directory")->required();
  metrics_cmd->add_option("--json", metrics_json, "Also write the report as JSON");
  metrics_cmd->add_option("--entropy-base", metrics_base, "Logarithm base for H");

  synth::SynthSpec spec;
  std::string synth_out, synth_kind = "flicker", synth_format = "png";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic test sequence");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--kind", synth_kind, "flicker | two_roi_scene | ramp")
      ->check(CLI::IsMember({"flicker", "two_roi_scene", "two_roi", "ramp"}));
  synth_cmd->add_option("--frames", spec.frames);
  synth_cmd->add_option("--width", spec.width);
  synth_cmd->add_option("--height", spec.height);
  synth_cmd->add_option("--amplitude", spec.amplitude, "Gain amplitude");
  synth_cmd->add_option("--period", spec.period, "Flicker period in frames");
  synth_cmd->add_option("--seed", spec.seed);
  synth_cmd->add_option("--format", synth_format)->check(CLI::IsMember({"png", "ppm"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enhance) {
      const auto result = pipeline::run(make_job(enhance_opts));
      if (result.has_report) {
        std::cout << metrics::to_key_value(result.input_report, "input.")
                  << metrics::to_key_value(result.output_report, "output.");
      }
    } else if (*curve) {
      pipeline::run(make_job(curve_opts));
    } else if (*metrics_cmd) {
      const auto seq = io::load_frames(metrics_in);
      const auto r = metrics::report(seq.frames, metrics_base);
      std::cout << metrics::to_key_value(r);
      if (!metrics_json.empty())
        pipeline::write_text(metrics_json, metrics::to_json(r).dump(2) + "\n");
    } else if (*synth_cmd) {
      spec.kind = synth::parse_kind(synth_kind);
      const auto seq = synth::generate(spec);
      io::store_frames(synth_out, seq.frames, io::parse_format(synth_format));
      sidecar::RoiSidecar sc;
      sc.defaults = seq.rois;
      pipeline::write_text(fs::path(synth_out) / "rois.json", sidecar::to_text(sc));
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
