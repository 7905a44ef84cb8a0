// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/theory/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"
#include "loralab/parallel.hpp"
#include "loralab/theory/analyzers.hpp"

namespace loralab::theory {

namespace {

constexpr std::uint64_t kSweepInitStream = 0x7377656570ULL;

void check_grid(const SweepConfig& cfg, const char* where) {
  if (cfg.ranks.empty()) throw ArgumentError(std::string(where) + ": empty rank grid");
  if (cfg.noise_rates.empty()) throw ArgumentError(std::string(where) + ": empty noise-rate grid");
  if (cfg.seeds.empty()) throw ArgumentError(std::string(where) + ": empty seed list");
}

SweepRecord run_cell(const SweepConfig& cfg, std::size_t rank, double eta, std::uint64_t seed) {
  data::TaskSpec spec = cfg.task;
  spec.noise_rate = eta;
  const data::TaskData task = data::make_task(spec, seed);
  model::LoraOptions opts;
  opts.lora_alpha = cfg.lora_alpha;
  opts.dropout = cfg.dropout;
  opts.readout = task.readout;
  model::LoraModel m = model::LoraModel::init(
      task.w0, rank, numerics::derive_seed(numerics::derive_seed(seed, kSweepInitStream), rank), opts);
  model::TrainConfig tc = cfg.train;
  tc.seed = seed;
  tc.early_stop_epoch.reset();
  const model::TrainHistory h = model::train(m, task.train, tc, &task.eval);
  const model::EpochStats& last = h.epochs.back();

  SweepRecord rec;
  rec.rank = rank;
  rec.noise_rate = eta;
  rec.seed = seed;
  rec.final_train_acc = last.train_accuracy;
  rec.eval_acc = last.eval_accuracy.value_or(std::numeric_limits<double>::quiet_NaN());
  rec.eval_err = 1.0 - rec.eval_acc;
  rec.clean_loss = last.clean_loss;
  rec.noisy_loss = last.noisy_loss;
  rec.bias_proxy = task.teacher ? data::tail_energy(*task.teacher, rank)
                                : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

SweepResult run_grid(const SweepConfig& cfg) {
  SweepResult out;
  out.ranks = cfg.ranks;
  out.noise_rates = cfg.noise_rates;
  out.seeds = cfg.seeds;
  const std::size_t ns = cfg.seeds.size();
  const std::size_t ne = cfg.noise_rates.size();
  out.records = parallel_map(cfg.ranks.size() * ne * ns, cfg.jobs, [&](std::size_t job) {
    return run_cell(cfg, cfg.ranks[job / (ne * ns)], cfg.noise_rates[(job / ns) % ne], cfg.seeds[job % ns]);
  });
  for (std::size_t ri = 0; ri < cfg.ranks.size(); ++ri) {
    for (std::size_t ei = 0; ei < ne; ++ei) {
      std::vector<double> acc, err;
      for (std::size_t si = 0; si < ns; ++si) {
        const SweepRecord& r = out.records[(ri * ne + ei) * ns + si];
        acc.push_back(r.final_train_acc);
        err.push_back(r.eval_err);
      }
      out.points.push_back(SweepPoint{cfg.ranks[ri], cfg.noise_rates[ei], aggregate(acc), aggregate(err)});
    }
  }
  for (std::size_t ei = 0; ei < ne; ++ei) {
    for (std::size_t si = 0; si < ns; ++si) {
      std::size_t best_rank = 0;
      double best_err = 0.0;
      for (std::size_t ri = 0; ri < cfg.ranks.size(); ++ri) {
        const SweepRecord& r = out.records[(ri * ne + ei) * ns + si];
        if (best_rank == 0 || r.eval_err < best_err || (r.eval_err == best_err && r.rank < best_rank)) {
          best_rank = r.rank;
          best_err = r.eval_err;
        }
      }
      out.argmins.push_back(ArgminRecord{cfg.noise_rates[ei], cfg.seeds[si], best_rank});
    }
  }
  return out;
}

}  // namespace

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("aggregate: no values");
  Aggregate a;
  a.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

double median(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("median: no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double SweepResult::median_argmin(double noise_rate) const {
  std::vector<double> ranks_at;
  for (const auto& a : argmins) {
    if (a.noise_rate == noise_rate) ranks_at.push_back(static_cast<double>(a.rank));
  }
  if (ranks_at.empty()) throw ArgumentError("median_argmin: noise rate not in the sweep");
  return median(ranks_at);
}

double SweepResult::median_train_acc(std::size_t rank, double noise_rate) const {
  std::vector<double> acc;
  for (const auto& r : records) {
    if (r.rank == rank && r.noise_rate == noise_rate) acc.push_back(r.final_train_acc);
  }
  if (acc.empty()) throw ArgumentError("median_train_acc: cell not in the sweep");
  return median(acc);
}

SweepResult memorization_sweep(const SweepConfig& cfg) {
  check_grid(cfg, "memorization_sweep");
  return run_grid(cfg);
}

SweepResult rank_tradeoff_sweep(const SweepConfig& cfg) {
  check_grid(cfg, "rank_tradeoff_sweep");
  if (cfg.task.source != data::Source::kSynthetic || cfg.task.label_mode != data::LabelMode::kTeacher) {
    throw ArgumentError("rank_tradeoff_sweep: needs a synthetic teacher task");
  }
  return run_grid(cfg);
}

TemporalResult temporal_run(const TemporalConfig& cfg) {
  if (cfg.seeds.empty()) throw ArgumentError("temporal_run: empty seed list");
  ract::RactConfig rc = cfg.ract;
  rc.r_low = cfg.reference_rank;
  rc.r_high = cfg.rank;
  rc.auto_epochs = false;
  rc.low_epochs.reset();
  rc.discrepancy_window = 1;
  rc.phase4 = false;
  rc.baseline = false;
  rc.track_f1 = true;

  struct SeedRun {
    std::vector<TemporalRecord> records;
    TemporalSeedSummary summary;
  };
  std::vector<SeedRun> runs = parallel_map(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
    const std::uint64_t seed = cfg.seeds[i];
    const ract::RactResult res = ract::ract_run(data::make_task(cfg.task, seed), rc, seed);
    const model::TrainHistory& h = res.history_high;
    SeedRun run;
    run.summary.seed = seed;
    for (std::size_t t = 0; t <= h.epoch_count(); ++t) {
      const model::EpochStats& s = h.at(t);
      run.records.push_back(TemporalRecord{t, seed, s.clean_loss, s.noisy_loss, s.train_accuracy,
                                           res.f1_by_epoch.at(t)});
    }
    const std::vector<double> clean = clean_loss_series(h);
    run.summary.clean_half_life = half_life_epoch(clean);
    if (h.has_noisy) {
      const std::vector<double> noisy = noisy_loss_series(h);
      run.summary.noisy_half_life = half_life_epoch(noisy);
      if (noisy.size() > rc.t_star_window) {
        run.summary.t_star = estimate_t_star_empirical(noisy, rc.t_star_window, rc.t_star_frac);
      }
    }
    return run;
  });

  TemporalResult out;
  for (auto& run : runs) {
    out.records.insert(out.records.end(), run.records.begin(), run.records.end());
    out.summaries.push_back(run.summary);
  }
  return out;
}

}  // namespace loralab::theory
