#include "jrs/pipeline.hpp"

#include "jrs/exact_updates.hpp"
#include "jrs/joint_energy.hpp"
#include "jrs/metrics.hpp"
#include "jrs/primal_dual.hpp"
#include "jrs/recon.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace jrs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool energy_enabled(const Problem& problem, const JointConfig& config) {
  switch (config.energy) {
    case EnergyMode::off: return false;
    case EnergyMode::dense: return true;
    case EnergyMode::automatic: return problem.grid().pixels() <= kDenseEnergyLimit;
  }
  return false;
}

void note_segmentation(const SegResult& seg, int iter, RunRecord& rec) {
  if (!seg.converged) {
    rec.warnings.push_back("iteration " + std::to_string(iter) + ": SDIE stopped after " +
                       std::to_string(seg.iterations) + " iterations without converging");
  }
  if (seg.rank_deficient) {
    rec.notes.push_back("iteration " + std::to_string(iter) +
                       ": interpolation block stayed rank deficient after resampling");
  }
}

}  // namespace

InitialState initialise(const Problem& problem, const JointConfig& config) {
  InitialState s;
  const QuadraticFidelityProx prox(problem.model, problem.observed, config.init_fidelity, 0.0,
                                   problem.observed, config.prox_tolerance,
                                   config.prox_max_iters);
  PrimalDualOptions opts = pd_options(config);
  opts.max_iters = config.init_max_iters;
  // With T = I the fidelity is 2 lambda-strongly convex, which buys acceleration.
  const double gamma =
      problem.model.kind() == ModelKind::identity ? 2.0 * config.init_fidelity : 0.0;
  TVSolveResult tv = solve_huber_tv(problem.observed, config.init_huber(), prox, opts, gamma);
  s.x = std::move(tv.x);
  s.tv_iterations = tv.iterations;
  s.tv_converged = tv.converged;

  const Index ny = problem.partition().reconstructed;
  Vector start = problem.labels();
  start.head(ny).setConstant(config.u0);
  s.segmentation = seg_update(start, start, s.x, problem, config, {1.0, 0.0}, mix_seed(config.seed, 0));
  s.u = s.segmentation.u;
  return s;
}

RunRecord joint_rec_seg(const Problem& problem, const JointConfig& config,
                        const GroundTruth& truth, const IterationObserver& observer) {
  config.validate();
  const Index ny = problem.partition().reconstructed;
  const bool with_energy = energy_enabled(problem, config);
  RunRecord rec;
  double best_score = -std::numeric_limits<double>::infinity();

  auto record = [&](int iter, const ImageField& x, const Vector& u, double t_rec, double t_seg) {
    IterationRow row;
    row.iter = iter;
    row.dice = truth.mask ? dice(u.head(ny), *truth.mask) : kNaN;
    row.psnr_db = truth.image ? psnr(x, *truth.image) : kNaN;
    row.energy = with_energy ? joint_energy(u, x, problem, config) : kNaN;
    row.recon_seconds = t_rec;
    row.seg_seconds = t_seg;
    rec.rows.push_back(row);
    rec.final_x = x;
    rec.final_u = u;
    const double score = truth.mask ? row.dice : truth.image ? row.psnr_db : iter;
    if (score > best_score) {
      best_score = score;
      rec.best_iter = iter;
      rec.best_x = x;
      rec.best_u = u;
    }
    if (observer) observer(row, x, u);
  };

  try {
    auto t0 = Clock::now();
    InitialState init = initialise(problem, config);
    const double t_init = seconds_since(t0);
    if (!init.tv_converged) {
      rec.warnings.push_back("initial reconstruction stopped after " +
                             std::to_string(init.tv_iterations) + " iterations without converging");
    }
    note_segmentation(init.segmentation, 0, rec);
    record(0, init.x, init.u, t_init, 0.0);

    ImageField x = std::move(init.x);
    Vector u = std::move(init.u);
    for (int n = 0; n < config.iterations; ++n) {
      const std::uint64_t recon_seed = mix_seed(config.seed, 2 * n + 2);
      const std::uint64_t seg_seed = mix_seed(config.seed, 2 * n + 3);

      t0 = Clock::now();
      ImageField x_next = config.exact_updates ? exact_x_update(x, u, problem, config)
                                               : recon_update(x, u, problem, config, recon_seed).x;
      const double t_rec = seconds_since(t0);

      t0 = Clock::now();
      Vector u_next;
      if (config.exact_updates) {
        u_next = exact_u_update(u, x_next, problem, config);
      } else {
        SegResult seg = seg_update(u, x_next, problem, config, seg_seed);
        note_segmentation(seg, n + 1, rec);
        u_next = std::move(seg.u);
      }
      const double t_seg = seconds_since(t0);

      x = std::move(x_next);
      u = std::move(u_next);
      record(n + 1, x, u, t_rec, t_seg);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

std::string run_csv(const RunRecord& record) {
  std::ostringstream out;
  out.precision(10);
  out << "iter,dice,psnr_db,energy,recon_seconds,seg_seconds\n";
  for (const IterationRow& r : record.rows) {
    out << r.iter << ',' << r.dice << ',' << r.psnr_db << ',' << r.energy << ',' << r.recon_seconds
        << ',' << r.seg_seconds << '\n';
  }
  return out.str();
}

}  // namespace jrs
