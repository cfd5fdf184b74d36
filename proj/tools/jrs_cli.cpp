// Command-line front end: segment, joint, metrics and synth subcommands.

#include "jrs/config.hpp"
#include "jrs/image_io.hpp"
#include "jrs/metrics.hpp"
#include "jrs/pipeline.hpp"
#include "jrs/sdie.hpp"
#include "jrs/synth.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace jrs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarning = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool exact_mode = false;
  std::optional<int> iterations;
  std::vector<std::string> overrides;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON configuration file");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_flag("--exact-mode", f.exact_mode, "full-rank Nystrom / dense weights");
  cmd->add_option("--iters", f.iterations, "outer iterations");
  cmd->add_option("--set", f.overrides, "config override key=value (repeatable)");
  cmd->add_option("-o,--output-dir", f.output_dir, "directory for results");
}

JointConfig resolve_config(const CommonFlags& f) {
  JointConfig c = f.config_path.empty() ? JointConfig{} : load_config(f.config_path);
  for (const std::string& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
    apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) c.seed = *f.seed;
  if (f.exact_mode) c.exact_mode = true;
  if (f.iterations) c.iterations = *f.iterations;
  if (!f.output_dir.empty()) c.output_dir = f.output_dir;
  c.validate();
  return c;
}

void require_path(const std::string& path, const char* key) {
  if (path.empty()) throw std::invalid_argument(std::string("config: ") + key + " is required");
}

ReferenceData load_reference(const JointConfig& c) {
  require_path(c.reference_image, "reference_image");
  require_path(c.reference_mask, "reference_mask");
  const ImageField ref = read_image(c.reference_image);
  PixelGrid mask_grid;
  const Vector mask = read_mask(c.reference_mask, &mask_grid);
  if (mask_grid.height != ref.grid.height || mask_grid.width != ref.grid.width) {
    throw std::invalid_argument("reference mask and reference image sizes differ");
  }
  if (c.reference_samples == 0) return make_reference(ref, mask);
  const auto pixels = stratified_pixels(mask, c.reference_samples, mix_seed(c.seed, 0xfeed));
  return make_reference(ref, mask, pixels);
}

Problem load_problem(const JointConfig& c) {
  require_path(c.observed_image, "observed_image");
  ImageField y = read_image(c.observed_image);
  const ForwardModel model = c.forward_model();
  if (c.observation_noise > 0.0) {
    y = add_gaussian_noise(model.apply(y), c.observation_noise, mix_seed(c.seed, 0xa11));
  }
  return Problem(std::move(y), model, load_reference(c));
}

GroundTruth load_truth(const JointConfig& c) {
  GroundTruth t;
  if (!c.ground_truth_image.empty()) t.image = read_image(c.ground_truth_image);
  if (!c.ground_truth_mask.empty()) t.mask = read_mask(c.ground_truth_mask);
  return t;
}

std::string numbered(const std::string& stem, int iter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03d.png", iter);
  return stem + buf;
}

int run_joint(const CommonFlags& flags) {
  const JointConfig c = resolve_config(flags);
  const Problem problem = load_problem(c);
  const GroundTruth truth = load_truth(c);
  const fs::path out(c.output_dir);
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "config_used.json");
    cfg << to_json(c) << '\n';
  }
  const Index h = problem.grid().height, w = problem.grid().width;
  const RunRecord rec = joint_rec_seg(
      problem, c, truth, [&](const IterationRow& row, const ImageField& x, const Vector&) {
        write_png((out / numbered("recon", row.iter)).string(), x);
        std::cerr << "iter " << row.iter << "  dice " << row.dice << "  psnr " << row.psnr_db
                  << "  energy " << row.energy << '\n';
      });
  std::ofstream(out / "run.csv") << run_csv(rec);
  if (!rec.rows.empty()) {
    write_mask_png((out / "final_mask.png").string(), rec.final_u, h, w);
    write_mask_png((out / "best_mask.png").string(), rec.best_u, h, w);
    write_png((out / "final_recon.png").string(), rec.final_x);
    write_png((out / "best_recon.png").string(), rec.best_x);
  }
  for (const std::string& msg : rec.notes) std::cerr << "note: " << msg << '\n';
  for (const std::string& msg : rec.warnings) std::cerr << "warning: " << msg << '\n';
  if (!rec.error.empty()) {
    std::cerr << "error: " << rec.error << '\n';
    return kExitError;
  }
  std::cerr << "best iteration " << rec.best_iter << '\n';
  return rec.warning() ? kExitWarning : kExitOk;
}

int run_segment(const CommonFlags& flags, const std::string& image_path,
                const std::string& mask_out) {
  JointConfig c = resolve_config(flags);
  if (!image_path.empty()) c.observed_image = image_path;
  require_path(c.observed_image, "observed_image");
  Problem problem(read_image(c.observed_image), ForwardModel::identity(), load_reference(c));
  const Index ny = problem.partition().reconstructed;
  Vector start = problem.labels();
  start.head(ny).setConstant(c.u0);
  const SegResult seg =
      seg_update(start, start, problem.observed, problem, c, {1.0, 0.0}, mix_seed(c.seed, 0));
  const fs::path out = mask_out.empty() ? fs::path(c.output_dir) / "mask.png" : fs::path(mask_out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_mask_png(out.string(), seg.u, problem.grid().height, problem.grid().width);
  std::cout << "sdie_iterations " << seg.iterations << '\n';
  if (!c.ground_truth_mask.empty()) {
    std::cout << "dice " << dice(seg.u.head(ny), read_mask(c.ground_truth_mask)) << '\n';
  }
  if (!seg.converged) std::cerr << "warning: SDIE did not converge\n";
  if (seg.rank_deficient) std::cerr << "note: interpolation block rank deficient\n";
  return seg.converged ? kExitOk : kExitWarning;
}

int run_metrics(const std::string& mask, const std::string& truth_mask, const std::string& image,
                const std::string& truth_image) {
  bool any = false;
  if (!mask.empty() && !truth_mask.empty()) {
    std::cout << "dice " << dice(read_mask(mask), read_mask(truth_mask)) << '\n';
    any = true;
  }
  if (!image.empty() && !truth_image.empty()) {
    std::cout << "psnr_db " << psnr(read_image(image), read_image(truth_image)) << '\n';
    any = true;
  }
  if (!any) throw std::invalid_argument("metrics: give --mask/--truth-mask and/or --image/--truth-image");
  return kExitOk;
}

struct SynthFlags {
  std::string out_dir = "synth";
  Index size = 64;
  double noise = 0.0;
  Index blur = 0;
  std::uint64_t seed = 0;
  double background = 0.25;
  double foreground = 0.75;
};

int run_synth(const SynthFlags& f) {
  const fs::path out(f.out_dir);
  fs::create_directories(out);
  const SceneOptions opts{f.size, f.size, 1, f.background, f.foreground};
  const SynthScene scene = two_region_scene(opts, f.seed);
  const SynthScene reference = two_region_scene(opts, mix_seed(f.seed, 1));
  ImageField observed = scene.image;
  if (f.blur > 1) observed = ForwardModel::motion_blur(f.blur).apply(observed);
  observed = add_gaussian_noise(observed, f.noise, mix_seed(f.seed, 2));
  write_png((out / "clean.png").string(), scene.image);
  write_mask_png((out / "mask.png").string(), scene.mask, f.size, f.size);
  write_png((out / "observed.png").string(), observed);  // PNG clips to [0, 1]
  write_png((out / "reference.png").string(), reference.image);
  write_mask_png((out / "reference_mask.png").string(), reference.mask, f.size, f.size);
  std::cout << "wrote " << out.string() << "/{clean,mask,observed,reference,reference_mask}.png\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based joint image reconstruction and segmentation"};
  app.require_subcommand(1);

  CommonFlags joint_flags;
  CLI::App* joint = app.add_subcommand("joint", "alternating reconstruction and segmentation");
  add_common(joint, joint_flags);

  CommonFlags seg_flags;
  std::string seg_image, seg_out;
  CLI::App* segment = app.add_subcommand("segment", "SDIE segmentation of an image");
  add_common(segment, seg_flags);
  segment->add_option("--image", seg_image, "image to segment (default: observed_image)");
  segment->add_option("--mask-out", seg_out, "output mask path");

  std::string m_mask, m_truth_mask, m_image, m_truth_image;
  CLI::App* metrics = app.add_subcommand("metrics", "Dice and PSNR between files");
  metrics->add_option("--mask", m_mask);
  metrics->add_option("--truth-mask", m_truth_mask);
  metrics->add_option("--image", m_image);
  metrics->add_option("--truth-image", m_truth_image);

  SynthFlags sf;
  CLI::App* synth = app.add_subcommand("synth", "synthetic two-region images");
  synth->add_option("-o,--output-dir", sf.out_dir);
  synth->add_option("--size", sf.size)->check(CLI::PositiveNumber);
  synth->add_option("--noise", sf.noise, "Gaussian noise standard deviation")->check(CLI::NonNegativeNumber);
  synth->add_option("--blur", sf.blur, "horizontal motion blur length (0: none)");
  synth->add_option("--seed", sf.seed);
  synth->add_option("--background", sf.background);
  synth->add_option("--foreground", sf.foreground);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*joint) return run_joint(joint_flags);
    if (*segment) return run_segment(seg_flags, seg_image, seg_out);
    if (*metrics) return run_metrics(m_mask, m_truth_mask, m_image, m_truth_image);
    if (*synth) return run_synth(sf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
