#pragma once

#include "jrs/forward_model.hpp"
#include "jrs/huber_tv.hpp"

#include <cstdint>
#include <string>

namespace jrs {

enum class EnergyMode { off, dense, automatic };

/// Every scalar parameter of a joint run. Key names in the JSON config file
/// match the field names below.
struct JointConfig {
  // joint energy
  double alpha = 0.75;
  double beta = 1e-5;
  double epsilon = 0.00285;
  double tau = 0.00285;
  double sigma = 3.0;
  double eta = 0.1;
  double nu = 1e-6;
  double mu = 50.0;  // fidelity weight on Z

  // graph and segmentation
  Index rank = 100;  // K
  Index k1 = 0;      // 0: derived from rank
  Index k2 = 0;
  int k_s = 5;
  int n_b = 200;
  double delta = 1e-10;
  int max_sdie_iters = 300;
  double u0 = 0.47;

  // reconstruction
  double huber_scale = 10.0;
  double huber_threshold = 0.01;
  int pd_max_iters = 500;
  double pd_tolerance = 1e-6;
  int pd_patience = 3;
  double prox_tolerance = 1e-8;
  int prox_max_iters = 100;

  // initialisation
  double init_fidelity = 1.05;
  double init_huber_scale = 1.0;
  double init_huber_threshold = 1e-4;
  int init_max_iters = 2000;

  // forward model
  std::string model = "identity";  // identity | blur
  Index blur_length = 75;

  // outer loop
  int iterations = 25;
  std::uint64_t seed = 0;
  bool exact_mode = false;     // full-rank Nystrom (X = V)
  bool exact_updates = false;  // non-linearised subproblem solves with descent safeguards
  int exact_inner_iters = 20;
  EnergyMode energy = EnergyMode::automatic;

  // data files
  std::string reference_image;
  std::string reference_mask;
  std::string observed_image;
  std::string ground_truth_image;
  std::string ground_truth_mask;
  int reference_samples = 0;  // 0: every reference pixel is labelled
  /// When positive, observed_image is taken as clean and y = T(x) + noise is
  /// formed in memory, so the observation is never clipped by a file format.
  double observation_noise = 0.0;
  std::string output_dir = ".";

  static JointConfig denoising();
  static JointConfig deblurring();
  /// Denoising scaled for small generated scenes with a handful of labelled
  /// reference pixels: narrower kernel, unbiased start, weaker pull to u_n.
  static JointConfig synthetic();

  ForwardModel forward_model() const;
  HuberTV huber() const { return {huber_scale, huber_threshold}; }
  HuberTV init_huber() const { return {init_huber_scale, init_huber_threshold}; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Reads a JSON object. A "preset" key ("denoising", "deblurring" or "synthetic") selects
/// the starting values; the remaining keys override them. Unknown keys are errors.
JointConfig load_config(const std::string& path);
JointConfig parse_config(const std::string& json_text);

/// Applies `key = value` overrides with the same key names and value parsing as the file.
void apply_override(JointConfig& config, const std::string& key, const std::string& value);

std::string to_json(const JointConfig& config);

}  // namespace jrs
