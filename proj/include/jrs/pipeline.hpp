#pragma once

#include "jrs/config.hpp"
#include "jrs/problem.hpp"
#include "jrs/sdie.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jrs {

struct GroundTruth {
  std::optional<ImageField> image;
  std::optional<Vector> mask;  // over the pixels of y
};

struct InitialState {
  ImageField x;
  Vector u;
  int tv_iterations = 0;
  bool tv_converged = false;
  SegResult segmentation;
};

/// x0 = argmin HuberTV_init(grad x) + init_fidelity |T x - y|^2 (a TV surrogate
/// with a small Huber threshold), then u0 from SDIE with weight 1 and nu = 0
/// started at u0 chi_Y + f.
InitialState initialise(const Problem& problem, const JointConfig& config);

struct IterationRow {
  int iter = 0;
  double dice = 0.0;     // NaN without a ground-truth mask
  double psnr_db = 0.0;  // NaN without a ground-truth image
  double energy = 0.0;   // NaN when not evaluated
  double recon_seconds = 0.0;
  double seg_seconds = 0.0;
};

struct RunRecord {
  std::vector<IterationRow> rows;
  ImageField final_x;
  Vector final_u;
  ImageField best_x;
  Vector best_u;
  int best_iter = 0;
  std::vector<std::string> warnings;  // solver trouble: non-convergence
  std::vector<std::string> notes;     // informational, e.g. rank-deficient interpolation blocks
  std::string error;  // set when a phase failed and the record is partial

  bool warning() const { return !warnings.empty(); }
};

/// Called after every outer iteration (0 is the initialisation).
using IterationObserver =
    std::function<void(const IterationRow&, const ImageField& x, const Vector& u)>;

/// Initialisation followed by `iterations` alternations of the reconstruction
/// and segmentation updates. The best iterate is the one with the highest Dice
/// (PSNR if there is no mask). Exceptions from a phase are caught; the partial
/// record carries the message in `error`.
RunRecord joint_rec_seg(const Problem& problem, const JointConfig& config,
                        const GroundTruth& truth = {}, const IterationObserver& observer = {});

/// `iter,dice,psnr_db,energy,recon_seconds,seg_seconds` with one line per row.
std::string run_csv(const RunRecord& record);

}  // namespace jrs
