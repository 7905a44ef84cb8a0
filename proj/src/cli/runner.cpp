// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/cli/runner.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <system_error>

#include "loralab/errors.hpp"
#include "loralab/parallel.hpp"
#include "loralab/ract/ract.hpp"
#include "loralab/theory/sweeps.hpp"

namespace loralab::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Collects summary rows: one line per (key, metric) with mean, std and count.
class Summary {
 public:
  void add(std::string key, std::string metric, const std::vector<double>& values) {
    std::vector<double> finite;
    for (double v : values) {
      if (std::isfinite(v)) finite.push_back(v);
    }
    if (finite.empty()) {
      table_.rows.push_back({std::move(key), std::move(metric), kNan, kNan, std::uint64_t{0}});
      return;
    }
    const theory::Aggregate a = theory::aggregate(finite);
    table_.rows.push_back({std::move(key), std::move(metric), a.mean, a.std.value_or(kNan),
                           static_cast<std::uint64_t>(a.count)});
  }
  CsvTable take() { return std::move(table_); }

 private:
  CsvTable table_{{"key", "metric", "mean", "std", "n"}, {}};
};

std::string cell_key(std::size_t rank, double eta) {
  return "rank=" + std::to_string(rank) + ";noise_rate=" + format_value(eta);
}

theory::SweepConfig sweep_config(const ExperimentConfig& cfg) {
  theory::SweepConfig sc;
  sc.task = cfg.task;
  sc.ranks = cfg.ranks;
  sc.noise_rates = cfg.noise_rates;
  sc.seeds = cfg.seeds;
  sc.train = cfg.train;
  sc.lora_alpha = cfg.lora_alpha;
  sc.dropout = cfg.dropout;
  sc.jobs = cfg.jobs;
  return sc;
}

RunTables run_memorize(const ExperimentConfig& cfg) {
  const theory::SweepResult res = theory::memorization_sweep(sweep_config(cfg));
  CsvTable grid{{"rank", "noise_rate", "seed", "final_train_acc"}, {}};
  for (const auto& r : res.records) {
    grid.rows.push_back({static_cast<std::uint64_t>(r.rank), r.noise_rate, r.seed, r.final_train_acc});
  }
  Summary s;
  for (std::size_t ri = 0; ri < res.ranks.size(); ++ri) {
    for (std::size_t ei = 0; ei < res.noise_rates.size(); ++ei) {
      std::vector<double> acc;
      for (const auto& r : res.records) {
        if (r.rank == res.ranks[ri] && r.noise_rate == res.noise_rates[ei]) acc.push_back(r.final_train_acc);
      }
      s.add(cell_key(res.ranks[ri], res.noise_rates[ei]), "final_train_acc", acc);
    }
  }
  return {{{"memorization_grid.csv", std::move(grid)}, {"summary.csv", s.take()}}};
}

RunTables run_ranksweep(const ExperimentConfig& cfg) {
  const theory::SweepResult res = theory::rank_tradeoff_sweep(sweep_config(cfg));
  CsvTable table{{"rank", "noise_rate", "seed", "eval_err", "bias_proxy"}, {}};
  for (const auto& r : res.records) {
    table.rows.push_back({static_cast<std::uint64_t>(r.rank), r.noise_rate, r.seed, r.eval_err, r.bias_proxy});
  }
  Summary s;
  for (const auto& p : res.points) {
    std::vector<double> err;
    for (const auto& r : res.records) {
      if (r.rank == p.rank && r.noise_rate == p.noise_rate) err.push_back(r.eval_err);
    }
    s.add(cell_key(p.rank, p.noise_rate), "eval_err", err);
  }
  for (double eta : res.noise_rates) {
    std::vector<double> ranks;
    for (const auto& a : res.argmins) {
      if (a.noise_rate == eta) ranks.push_back(static_cast<double>(a.rank));
    }
    s.add("noise_rate=" + format_value(eta), "argmin_rank", ranks);
  }
  return {{{"ranksweep.csv", std::move(table)}, {"summary.csv", s.take()}}};
}

RunTables run_temporal(const ExperimentConfig& cfg) {
  theory::TemporalConfig tc;
  tc.task = cfg.task;
  tc.rank = cfg.temporal_rank;
  tc.reference_rank = cfg.reference_rank;
  tc.ract = cfg.ract;
  tc.seeds = cfg.seeds;
  tc.jobs = cfg.jobs;
  const theory::TemporalResult res = theory::temporal_run(tc);
  CsvTable table{{"epoch", "seed", "clean_loss", "noisy_loss", "train_acc", "detect_f1"}, {}};
  for (const auto& r : res.records) {
    table.rows.push_back(
        {static_cast<std::uint64_t>(r.epoch), r.seed, r.clean_loss, r.noisy_loss, r.train_acc, r.detect_f1});
  }
  auto as_value = [](const std::optional<std::size_t>& v) { return v ? static_cast<double>(*v) : kNan; };
  std::vector<double> t_star, clean_hl, noisy_hl;
  for (const auto& s : res.summaries) {
    t_star.push_back(as_value(s.t_star));
    clean_hl.push_back(as_value(s.clean_half_life));
    noisy_hl.push_back(as_value(s.noisy_half_life));
  }
  Summary s;
  const std::string key = cell_key(cfg.temporal_rank, cfg.task.noise_rate);
  s.add(key, "t_star", t_star);
  s.add(key, "clean_half_life", clean_hl);
  s.add(key, "noisy_half_life", noisy_hl);
  return {{{"temporal.csv", std::move(table)}, {"summary.csv", s.take()}}};
}

std::vector<ract::RactResult> ract_per_seed(const ExperimentConfig& cfg, const ract::RactConfig& rc) {
  return parallel_map(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
    const std::uint64_t seed = cfg.seeds[i];
    return ract::ract_run(data::make_task(cfg.task, seed), rc, seed);
  });
}

RunTables run_ract(const ExperimentConfig& cfg) {
  const std::vector<ract::RactResult> results = ract_per_seed(cfg, cfg.ract);
  CsvTable table{{"seed", "accuracy", "precision", "recall", "f1", "n_flagged", "tau", "r_low", "r_high"}, {}};
  std::vector<double> acc, base, prec, rec, f1, flagged;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ract::RactResult& r = results[i];
    const double a = r.phase4_accuracy.value_or(kNan);
    table.rows.push_back({cfg.seeds[i], a, r.metrics.precision, r.metrics.recall, r.metrics.f1,
                          static_cast<std::uint64_t>(r.noisy_count), r.tau,
                          static_cast<std::uint64_t>(cfg.ract.r_low), static_cast<std::uint64_t>(cfg.ract.r_high)});
    acc.push_back(a);
    base.push_back(r.baseline_accuracy.value_or(kNan));
    prec.push_back(r.metrics.precision);
    rec.push_back(r.metrics.recall);
    f1.push_back(r.metrics.f1);
    flagged.push_back(static_cast<double>(r.noisy_count));
  }
  Summary s;
  const std::string key = "r_low=" + std::to_string(cfg.ract.r_low) + ";r_high=" + std::to_string(cfg.ract.r_high);
  s.add(key, "accuracy", acc);
  if (cfg.ract.baseline) s.add(key, "baseline_accuracy", base);
  s.add(key, "precision", prec);
  s.add(key, "recall", rec);
  s.add(key, "f1", f1);
  s.add(key, "n_flagged", flagged);
  return {{{"ract_summary.csv", std::move(table)}, {"summary.csv", s.take()}}};
}

RunTables run_threshold(const ExperimentConfig& cfg) {
  ract::RactConfig rc = cfg.ract;
  rc.phase4 = false;
  rc.baseline = false;
  const std::vector<ract::RactResult> results = ract_per_seed(cfg, rc);
  std::vector<std::vector<ract::ThresholdRow>> per_seed;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const data::TaskData task = data::make_task(cfg.task, cfg.seeds[i]);
    per_seed.push_back(ract::threshold_sweep(results[i].discrepancies, task.train.noise_mask, cfg.taus));
  }
  CsvTable table{{"tau", "precision", "recall", "f1"}, {}};
  Summary s;
  for (std::size_t t = 0; t < cfg.taus.size(); ++t) {
    std::vector<double> p, r, f;
    for (const auto& rows : per_seed) {
      p.push_back(rows[t].metrics.precision);
      r.push_back(rows[t].metrics.recall);
      f.push_back(rows[t].metrics.f1);
    }
    table.rows.push_back({cfg.taus[t], theory::aggregate(p).mean, theory::aggregate(r).mean,
                          theory::aggregate(f).mean});
    const std::string key = "tau=" + format_value(cfg.taus[t]);
    s.add(key, "precision", p);
    s.add(key, "recall", r);
    s.add(key, "f1", f);
  }
  return {{{"threshold.csv", std::move(table)}, {"summary.csv", s.take()}}};
}

RunTables run_rankgap(const ExperimentConfig& cfg) {
  const std::vector<ract::RankGapRecord> recs =
      ract::rank_gap_sweep(cfg.task, cfg.pairs, cfg.ract, cfg.seeds, cfg.jobs);
  CsvTable table{{"r_low", "r_high", "seed", "accuracy", "f1"}, {}};
  for (const auto& r : recs) {
    table.rows.push_back({static_cast<std::uint64_t>(r.r_low), static_cast<std::uint64_t>(r.r_high), r.seed,
                          r.accuracy, r.f1});
  }
  Summary s;
  for (const auto& [lo, hi] : cfg.pairs) {
    std::vector<double> acc, f1;
    for (const auto& r : recs) {
      if (r.r_low == lo && r.r_high == hi) {
        acc.push_back(r.accuracy);
        f1.push_back(r.f1);
      }
    }
    const std::string key = "r_low=" + std::to_string(lo) + ";r_high=" + std::to_string(hi);
    s.add(key, "accuracy", acc);
    s.add(key, "f1", f1);
  }
  return {{{"rankgap.csv", std::move(table)}, {"summary.csv", s.take()}}};
}

template <class E>
[[noreturn]] void rethrow_as(const E&, const std::string& msg) {
  throw E(msg);
}

}  // namespace

std::string artifact_version() { return LORALAB_VERSION; }

RunTables compute(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
  const std::string ctx = std::string(kind_name(cfg.kind)) + ": ";
  try {
    switch (cfg.kind) {
      case Kind::kMemorize:
        return run_memorize(cfg);
      case Kind::kTemporal:
        return run_temporal(cfg);
      case Kind::kRanksweep:
        return run_ranksweep(cfg);
      case Kind::kRact:
      case Kind::kMnistRact:
        return run_ract(cfg);
      case Kind::kThreshold:
        return run_threshold(cfg);
      case Kind::kRankgap:
        return run_rankgap(cfg);
    }
  } catch (const IoError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const FormatError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const NumericError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const DimensionError& e) {
    rethrow_as(e, ctx + e.what());
  } catch (const ArgumentError& e) {
    rethrow_as(e, ctx + e.what());
  }
  throw ArgumentError(ctx + "unhandled experiment kind");
}

RunManifest run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  RunTables tables = compute(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  RunManifest m;
  m.kind = std::string(kind_name(cfg.kind));
  m.version = artifact_version();
  m.config = cfg.source;
  m.seeds = cfg.seeds;
  for (const auto& [name, table] : tables.files) {
    emit_csv(table, out_dir / name);
    m.files.emplace_back(name);
  }
  m.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json j;
  j["kind"] = m.kind;
  j["version"] = m.version;
  j["seeds"] = m.seeds;
  j["duration_seconds"] = m.duration_seconds;
  j["files"] = nlohmann::json::array();
  for (const auto& f : m.files) j["files"].push_back(f.generic_string());
  j["config"] = m.config;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (out_dir / "manifest.json").string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + (out_dir / "manifest.json").string());
  return m;
}

}  // namespace loralab::cli
