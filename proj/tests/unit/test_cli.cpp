// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "loralab/cli/config.hpp"
#include "loralab/cli/csv.hpp"
#include "loralab/cli/runner.hpp"
#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"

namespace {

namespace cli = loralab::cli;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("loralab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, MinimalRactUsesDefaults) {
  const auto c = cli::parse_config_text("kind: ract\nnoise_rate: 0.3\n");
  EXPECT_EQ(c.kind, cli::Kind::kRact);
  EXPECT_EQ(c.ract.r_low, 4u);
  EXPECT_EQ(c.ract.r_high, 16u);
  EXPECT_DOUBLE_EQ(c.task.noise_rate, 0.3);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{42, 123, 456}));
  EXPECT_EQ(c.ract.phase1.epochs, c.train.epochs);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    cli::parse_config_text("kind: ract\nnoise_rate: 0.3\ntrain:\n  learning_rte: 0.1\n");
    FAIL() << "expected ConfigError";
  } catch (const loralab::ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("train.learning_rte"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  }
}

TEST(Config, RejectsInvalidInputs) {
  EXPECT_THROW(cli::parse_config_text("kind: ract\nnoise_rate: 0.3\nseeds: []\n"), loralab::ConfigError);
  EXPECT_THROW(cli::parse_config_text("kind: ract\n"), loralab::ConfigError);
  EXPECT_THROW(cli::parse_config_text("kind: ract\nnoise_rate: 0.3\nseed: 1\nseeds: [2]\n"), loralab::ConfigError);
  EXPECT_THROW(cli::parse_config_text("kind: ract\nnoise_rate: 0.3\n", cli::Kind::kMemorize), loralab::ConfigError);
  EXPECT_THROW(cli::parse_config_text("kind: ract\nnoise_rate: [1]\n"), loralab::ConfigError);
  EXPECT_THROW(cli::parse_kind("nosuch"), loralab::ConfigError);
  EXPECT_THROW(cli::parse_config("/nonexistent/loralab.yaml"), loralab::IoError);
}

TEST(Config, SeedList) {
  EXPECT_EQ(cli::parse_seed_list("1,2,3"), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_THROW(cli::parse_seed_list(""), loralab::ConfigError);
  EXPECT_THROW(cli::parse_seed_list("1,x"), loralab::ConfigError);
}

TEST(Config, KindNamesRoundTrip) {
  for (auto k : {cli::Kind::kMemorize, cli::Kind::kTemporal, cli::Kind::kRanksweep, cli::Kind::kRact,
                 cli::Kind::kThreshold, cli::Kind::kRankgap, cli::Kind::kMnistRact}) {
    EXPECT_EQ(cli::parse_kind(cli::kind_name(k)), k);
  }
}

TEST(Csv, FormatsValues) {
  EXPECT_EQ(cli::format_value(0.5), "0.5");
  EXPECT_EQ(cli::format_value(0.1), "0.1");
  EXPECT_EQ(cli::format_value(std::int64_t{-3}), "-3");
  EXPECT_EQ(cli::format_value(std::uint64_t{18446744073709551615ULL}), "18446744073709551615");
  EXPECT_EQ(cli::format_value(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(cli::format_value(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(cli::format_value(std::string("ract")), "ract");
  EXPECT_THROW(cli::format_value(std::string("a,b")), loralab::ArgumentError);
}

TEST(Csv, HeaderOnlyTable) {
  cli::CsvTable t{{"tau", "precision", "recall", "f1"}, {}};
  EXPECT_EQ(cli::render_csv(t), "tau,precision,recall,f1\n");
  t.rows.push_back({1.0});
  EXPECT_THROW(cli::render_csv(t), loralab::ArgumentError);
}

TEST(Csv, ThousandRowsRoundTrip) {
  loralab::numerics::Rng rng(3);
  cli::CsvTable t{{"i", "x", "y"}, {}};
  for (std::int64_t i = 0; i < 1000; ++i) {
    t.rows.push_back({i, rng.gaussian() * std::pow(10.0, rng.uniform(-12, 12)), rng.uniform(0.0, 1.0)});
  }
  const fs::path dir = scratch("roundtrip");
  cli::emit_csv(t, dir / "t.csv");
  const auto back = cli::read_csv(dir / "t.csv");
  ASSERT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), 1000u);
  for (std::size_t r = 0; r < 1000; ++r) {
    EXPECT_EQ(std::stoll(back.rows[r][0]), std::get<std::int64_t>(t.rows[r][0]));
    EXPECT_EQ(cli::parse_double(back.rows[r][1]), std::get<double>(t.rows[r][1]));
    EXPECT_EQ(cli::parse_double(back.rows[r][2]), std::get<double>(t.rows[r][2]));
  }
  fs::remove_all(dir);
}

TEST(Csv, UnwritablePathRaisesIoError) {
  const cli::CsvTable t{{"a"}, {}};
  EXPECT_THROW(cli::emit_csv(t, "/nonexistent/dir/t.csv"), loralab::IoError);
  EXPECT_THROW(cli::read_csv("/nonexistent/dir/t.csv"), loralab::IoError);
  EXPECT_THROW(cli::parse_double("abc"), loralab::FormatError);
}

// Pinned tiny runs per kind, checked against files in the golden directory:
// headers must match exactly, values to 1e-9 relative.
class Golden : public ::testing::TestWithParam<const char*> {};

TEST_P(Golden, SchemaAndValuesMatch) {
  const fs::path golden = LORALAB_GOLDEN_DIR;
  const std::string kind = GetParam();
  const auto cfg = cli::parse_config(golden / (kind + ".yaml"));
  const auto tables = cli::compute(cfg);
  ASSERT_EQ(tables.files.size(), 2u);
  for (const auto& [name, table] : tables.files) {
    const std::string stem = fs::path(name).stem().string();
    const fs::path expect_path = golden / (stem == "summary" ? "summary_" + kind + ".csv" : name);
    const auto expect = cli::read_csv(expect_path);
    const auto got = cli::parse_csv(cli::render_csv(table));
    ASSERT_EQ(got.header, expect.header) << expect_path;
    ASSERT_EQ(got.rows.size(), expect.rows.size()) << expect_path;
    for (std::size_t r = 0; r < got.rows.size(); ++r) {
      for (std::size_t c = 0; c < got.header.size(); ++c) {
        const std::string& g = got.rows[r][c];
        const std::string& e = expect.rows[r][c];
        if (g == e) continue;
        const double gv = cli::parse_double(g);
        const double ev = cli::parse_double(e);
        EXPECT_NEAR(gv, ev, 1e-9 * (std::abs(ev) + 1.0)) << expect_path << " row " << r << " col " << got.header[c];
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, Golden,
                         ::testing::Values("memorize", "temporal", "ranksweep", "ract", "threshold", "rankgap"));

TEST(Schemas, HeadersAreFixed) {
  const fs::path golden = LORALAB_GOLDEN_DIR;
  const std::vector<std::pair<std::string, std::string>> expect{
      {"memorization_grid.csv", "rank,noise_rate,seed,final_train_acc"},
      {"temporal.csv", "epoch,seed,clean_loss,noisy_loss,train_acc,detect_f1"},
      {"ranksweep.csv", "rank,noise_rate,seed,eval_err,bias_proxy"},
      {"ract_summary.csv", "seed,accuracy,precision,recall,f1,n_flagged,tau,r_low,r_high"},
      {"threshold.csv", "tau,precision,recall,f1"},
      {"rankgap.csv", "r_low,r_high,seed,accuracy,f1"},
  };
  for (const auto& [file, header] : expect) {
    const std::string text = slurp(golden / file);
    EXPECT_EQ(text.substr(0, text.find('\n')), header) << file;
  }
}

TEST(Runner, WritesFilesAndManifest) {
  const fs::path dir = scratch("run");
  auto cfg = cli::parse_config(fs::path(LORALAB_GOLDEN_DIR) / "ract.yaml");
  const auto m = cli::run(cfg, dir);
  EXPECT_EQ(m.kind, "ract");
  EXPECT_EQ(m.version, cli::artifact_version());
  EXPECT_TRUE(fs::exists(dir / "ract_summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  const std::string summary = slurp(dir / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')), cli::kSummaryHeader);
  const std::string first = slurp(dir / "ract_summary.csv");
  cli::run(cfg, dir);
  EXPECT_EQ(slurp(dir / "ract_summary.csv"), first);
  fs::remove_all(dir);
}

}  // namespace
