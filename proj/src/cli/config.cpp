// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "loralab/errors.hpp"

namespace loralab::cli {

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 7> kKindNames{{
    {Kind::kMemorize, "memorize"},
    {Kind::kTemporal, "temporal"},
    {Kind::kRanksweep, "ranksweep"},
    {Kind::kRact, "ract"},
    {Kind::kThreshold, "threshold"},
    {Kind::kRankgap, "rankgap"},
    {Kind::kMnistRact, "mnist-ract"},
}};

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& msg) {
  throw ConfigError(where(node) + "'" + key + "' " + msg);
}

// A mapping whose keys are checked against an allow-list up front.
class Section {
 public:
  Section(YAML::Node node, std::string name, std::initializer_list<std::string_view> allowed)
      : node_(std::move(node)), name_(std::move(name)) {
    if (!node_.IsMap()) throw ConfigError(where(node_) + "'" + name_ + "' must be a mapping");
    std::set<std::string_view> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!ok.contains(key)) {
        throw ConfigError(where(kv.first) + "unknown key '" + qualified(key) + "'");
      }
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  YAML::Node get(const std::string& key) const { return node_[key]; }
  std::string qualified(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  template <class T>
  void read(const std::string& key, T& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    out = scalar<T>(v, qualified(key));
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    out = scalar<T>(v, qualified(key));
  }

  template <class T>
  void read_list(const std::string& key, std::vector<T>& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    if (!v.IsSequence()) fail(v, qualified(key), "must be a list");
    std::vector<T> values;
    for (const auto& item : v) values.push_back(scalar<T>(item, qualified(key)));
    if (values.empty()) fail(v, qualified(key), "must not be empty");
    out = std::move(values);
  }

  template <class T>
  static T scalar(const YAML::Node& v, const std::string& key) {
    if (!v.IsScalar()) fail(v, key, "must be a scalar");
    if constexpr (std::is_same_v<T, std::string>) {
      return v.Scalar();
    } else if constexpr (std::is_same_v<T, bool>) {
      bool b = false;
      if (!YAML::convert<bool>::decode(v, b)) fail(v, key, "must be true or false");
      return b;
    } else if constexpr (std::is_floating_point_v<T>) {
      T x{};
      if (!YAML::convert<T>::decode(v, x) || !std::isfinite(x)) fail(v, key, "must be a finite number");
      return x;
    } else {
      const std::string& s = v.Scalar();
      T x{};
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail(v, key, "must be a non-negative integer");
      return x;
    }
  }

  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string name_;
};

void read_train(const Section& parent, const std::string& key, model::TrainConfig& tc) {
  if (!parent.has(key)) return;
  const Section s(parent.get(key), key,
                  {"epochs", "batch_size", "learning_rate", "weight_decay", "clip_norm", "cosine_decay"});
  s.read("epochs", tc.epochs);
  s.read("batch_size", tc.batch_size);
  s.read("learning_rate", tc.learning_rate);
  s.read("weight_decay", tc.weight_decay);
  s.read("clip_norm", tc.clip_norm);
  s.read("cosine_decay", tc.cosine_decay);
  if (tc.epochs == 0) fail(s.get("epochs"), key + ".epochs", "must be at least 1");
  if (tc.batch_size == 0) fail(s.get("batch_size"), key + ".batch_size", "must be at least 1");
  if (!(tc.learning_rate > 0.0)) fail(s.get("learning_rate"), key + ".learning_rate", "must be positive");
  if (tc.weight_decay < 0.0) fail(s.get("weight_decay"), key + ".weight_decay", "must be non-negative");
}

void read_data(const Section& root, data::TaskSpec& t) {
  if (!root.has("data")) return;
  const Section s(root.get("data"), "data",
                  {"source", "d", "k", "classes", "teacher_rank", "smooth_alpha", "label_mode", "readout",
                   "n_train", "n_eval", "teacher_seed", "mnist_images", "mnist_labels", "limit", "hidden",
                   "eval_fraction"});
  if (s.has("source")) {
    const auto src = Section::scalar<std::string>(s.get("source"), "data.source");
    if (src == "synthetic") {
      t.source = data::Source::kSynthetic;
    } else if (src == "mnist") {
      t.source = data::Source::kMnist;
    } else {
      fail(s.get("source"), "data.source", "must be synthetic or mnist");
    }
  }
  s.read("d", t.d);
  s.read("k", t.k);
  s.read("classes", t.num_classes);
  s.read("teacher_rank", t.teacher_rank);
  s.read("smooth_alpha", t.smooth_alpha);
  if (s.has("label_mode")) {
    const auto mode = Section::scalar<std::string>(s.get("label_mode"), "data.label_mode");
    if (mode == "teacher") {
      t.label_mode = data::LabelMode::kTeacher;
    } else if (mode == "random") {
      t.label_mode = data::LabelMode::kRandom;
    } else {
      fail(s.get("label_mode"), "data.label_mode", "must be teacher or random");
    }
  }
  s.read("readout", t.readout);
  s.read("n_train", t.n_train);
  s.read("n_eval", t.n_eval);
  s.read("teacher_seed", t.teacher_seed);
  if (s.has("mnist_images")) t.mnist_images = Section::scalar<std::string>(s.get("mnist_images"), "data.mnist_images");
  if (s.has("mnist_labels")) t.mnist_labels = Section::scalar<std::string>(s.get("mnist_labels"), "data.mnist_labels");
  s.read("limit", t.mnist_limit);
  s.read("hidden", t.hidden);
  s.read("eval_fraction", t.eval_fraction);

  if (t.d == 0 || t.k == 0) fail(s.node(), "data", "d and k must be positive");
  if (t.num_classes < 2) fail(s.node(), "data.classes", "must be at least 2");
  if (t.n_train == 0) fail(s.node(), "data.n_train", "must be positive");
  if (t.teacher_rank == 0 || t.teacher_rank > std::min(t.d, t.k)) {
    fail(s.node(), "data.teacher_rank", "must lie in [1, min(d, k)]");
  }
  if (!(t.smooth_alpha > 0.0)) fail(s.node(), "data.smooth_alpha", "must be positive");
  if (!(t.eval_fraction > 0.0 && t.eval_fraction < 1.0)) fail(s.node(), "data.eval_fraction", "must lie in (0, 1)");
  if (t.hidden == 0) fail(s.node(), "data.hidden", "must be positive");
}

void read_ract(const Section& root, ract::RactConfig& rc) {
  if (!root.has("ract")) return;
  const Section s(root.get("ract"), "ract",
                  {"r_low", "r_high", "threshold", "eta_hat", "auto_epochs", "epoch_margin", "t_star_window",
                   "t_star_frac", "low_epochs", "discrepancy_window", "phase4", "baseline"});
  s.read("r_low", rc.r_low);
  s.read("r_high", rc.r_high);
  if (s.has("threshold")) {
    const YAML::Node v = s.get("threshold");
    if (v.IsScalar() && v.Scalar() == "auto") {
      rc.threshold_mode = ract::ThresholdMode::kQuantile;
    } else {
      rc.threshold_mode = ract::ThresholdMode::kFixed;
      rc.tau = Section::scalar<double>(v, "ract.threshold");
      if (!(rc.tau > 0.0)) fail(v, "ract.threshold", "must be positive or auto");
    }
  }
  s.read("eta_hat", rc.eta_hat);
  if (rc.eta_hat && !(*rc.eta_hat >= 0.0 && *rc.eta_hat < 1.0)) {
    fail(s.get("eta_hat"), "ract.eta_hat", "must lie in [0, 1)");
  }
  s.read("auto_epochs", rc.auto_epochs);
  s.read("epoch_margin", rc.epoch_margin);
  s.read("t_star_window", rc.t_star_window);
  s.read("t_star_frac", rc.t_star_frac);
  s.read("low_epochs", rc.low_epochs);
  s.read("discrepancy_window", rc.discrepancy_window);
  s.read("phase4", rc.phase4);
  s.read("baseline", rc.baseline);
  if (rc.r_low == 0 || rc.r_low >= rc.r_high) fail(s.node(), "ract.r_low", "must satisfy 1 <= r_low < r_high");
  if (rc.t_star_window == 0) fail(s.get("t_star_window"), "ract.t_star_window", "must be at least 1");
  if (rc.discrepancy_window == 0) {
    fail(s.get("discrepancy_window"), "ract.discrepancy_window", "must be at least 1");
  }
}

// Settings that differ per experiment kind before the file is applied.
void apply_kind_defaults(ExperimentConfig& c) {
  c.train.batch_size = 32;
  c.ract.phase4_train.batch_size = 32;
  switch (c.kind) {
    case Kind::kMemorize:
      c.task.label_mode = data::LabelMode::kRandom;
      c.task.n_train = 400;
      c.task.n_eval = 200;
      c.train.epochs = 200;
      c.noise_rates = {0.0};
      break;
    case Kind::kTemporal:
      c.task.n_train = 400;
      c.task.n_eval = 200;
      c.train.epochs = 400;
      c.train.learning_rate = 1e-3;
      c.ract.t_star_window = 15;
      c.ract.t_star_frac = 0.02;
      c.ract.threshold_mode = ract::ThresholdMode::kQuantile;
      break;
    case Kind::kRanksweep:
      c.task.n_eval = 2000;
      c.train.epochs = 100;
      c.noise_rates = {0.0, 0.4};
      break;
    case Kind::kRact:
    case Kind::kThreshold:
    case Kind::kRankgap:
      c.task.smooth_alpha = 3.0;
      c.train.epochs = 100;
      c.ract.phase4_train.epochs = 50;
      c.ract.phase4 = c.kind != Kind::kThreshold;
      c.ract.baseline = c.kind == Kind::kRact;
      break;
    case Kind::kMnistRact:
      c.task.source = data::Source::kMnist;
      c.train.epochs = 100;
      c.train.learning_rate = 3e-3;
      c.train.cosine_decay = true;
      c.ract.phase4_train = c.train;
      c.ract.threshold_mode = ract::ThresholdMode::kQuantile;
      c.ract.baseline = true;
      break;
  }
}

bool is_ract_family(Kind k) {
  return k == Kind::kRact || k == Kind::kThreshold || k == Kind::kRankgap || k == Kind::kMnistRact ||
         k == Kind::kTemporal;
}

}  // namespace

std::string_view kind_name(Kind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

Kind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view tok = text.substr(start, comma - start);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ConfigError("seeds: '" + std::string(tok) + "' is not an unsigned integer");
    }
    seeds.push_back(v);
    start = comma + 1;
  }
  return seeds;
}

ExperimentConfig parse_config_text(std::string_view text, std::optional<Kind> cli_kind) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  try {
    const Section s(root, "",
                    {"kind", "seed", "seeds", "noise_rate", "output", "jobs", "data", "model", "train", "phase4",
                     "sweep", "temporal", "ract", "threshold", "rankgap"});
    ExperimentConfig c;
    c.source = std::string(text);

    std::optional<Kind> file_kind;
    if (s.has("kind")) {
      const auto name = Section::scalar<std::string>(s.get("kind"), "kind");
      try {
        file_kind = parse_kind(name);
      } catch (const ConfigError& e) {
        throw ConfigError(where(s.get("kind")) + e.what());
      }
    }
    if (file_kind && cli_kind && *file_kind != *cli_kind) {
      throw ConfigError(where(s.get("kind")) + "'kind' is " + std::string(kind_name(*file_kind)) +
                        " but the command line asks for " + std::string(kind_name(*cli_kind)));
    }
    if (!file_kind && !cli_kind) throw ConfigError("missing required field 'kind'");
    c.kind = file_kind ? *file_kind : *cli_kind;
    apply_kind_defaults(c);

    if (s.has("seed") && s.has("seeds")) throw ConfigError(where(s.get("seeds")) + "give either 'seed' or 'seeds'");
    if (s.has("seed")) c.seeds = {Section::scalar<std::uint64_t>(s.get("seed"), "seed")};
    if (s.has("seeds")) {
      const YAML::Node v = s.get("seeds");
      if (!v.IsSequence()) fail(v, "seeds", "must be a list");
      if (v.size() == 0) fail(v, "seeds", "must not be empty");
      s.read_list("seeds", c.seeds);
    }

    std::optional<double> noise_rate;
    s.read("noise_rate", noise_rate);
    if (noise_rate) {
      if (!(*noise_rate >= 0.0 && *noise_rate < 1.0)) fail(s.get("noise_rate"), "noise_rate", "must lie in [0, 1)");
      c.task.noise_rate = *noise_rate;
    } else if (is_ract_family(c.kind)) {
      throw ConfigError("missing required field 'noise_rate'");
    }
    if (s.has("output")) c.output = Section::scalar<std::string>(s.get("output"), "output");
    s.read("jobs", c.jobs);
    if (c.jobs == 0) fail(s.get("jobs"), "jobs", "must be at least 1");

    read_data(s, c.task);
    if (s.has("model")) {
      const Section m(s.get("model"), "model", {"lora_alpha", "dropout"});
      m.read("lora_alpha", c.lora_alpha);
      m.read("dropout", c.dropout);
      if (!(c.lora_alpha > 0.0)) fail(m.get("lora_alpha"), "model.lora_alpha", "must be positive");
      if (!(c.dropout >= 0.0 && c.dropout < 1.0)) fail(m.get("dropout"), "model.dropout", "must lie in [0, 1)");
    }
    read_train(s, "train", c.train);
    if (c.kind == Kind::kMnistRact && !s.has("phase4")) c.ract.phase4_train = c.train;
    read_train(s, "phase4", c.ract.phase4_train);

    if (s.has("sweep")) {
      const Section sw(s.get("sweep"), "sweep", {"ranks", "noise_rates"});
      sw.read_list("ranks", c.ranks);
      sw.read_list("noise_rates", c.noise_rates);
      for (double eta : c.noise_rates) {
        if (!(eta >= 0.0 && eta < 1.0)) fail(sw.get("noise_rates"), "sweep.noise_rates", "entries must lie in [0, 1)");
      }
      for (std::size_t r : c.ranks) {
        if (r == 0) fail(sw.get("ranks"), "sweep.ranks", "entries must be positive");
      }
    } else if (noise_rate && (c.kind == Kind::kMemorize || c.kind == Kind::kRanksweep)) {
      c.noise_rates = {*noise_rate};
    }

    if (s.has("temporal")) {
      const Section t(s.get("temporal"), "temporal", {"rank", "reference_rank"});
      t.read("rank", c.temporal_rank);
      t.read("reference_rank", c.reference_rank);
      if (c.reference_rank == 0 || c.reference_rank >= c.temporal_rank) {
        fail(t.node(), "temporal.reference_rank", "must satisfy 1 <= reference_rank < rank");
      }
    }

    read_ract(s, c.ract);
    if (c.ract.threshold_mode == ract::ThresholdMode::kQuantile && !c.ract.eta_hat) {
      c.ract.eta_hat = c.task.noise_rate;
    }

    if (s.has("threshold")) {
      const Section t(s.get("threshold"), "threshold", {"taus"});
      t.read_list("taus", c.taus);
      for (double tau : c.taus) {
        if (!(tau > 0.0)) fail(t.get("taus"), "threshold.taus", "entries must be positive");
      }
    }

    if (s.has("rankgap")) {
      const Section g(s.get("rankgap"), "rankgap", {"pairs"});
      const YAML::Node v = g.get("pairs");
      if (v) {
        if (!v.IsSequence() || v.size() == 0) fail(v, "rankgap.pairs", "must be a non-empty list of [r_low, r_high]");
        c.pairs.clear();
        for (const auto& p : v) {
          if (!p.IsSequence() || p.size() != 2) fail(p, "rankgap.pairs", "entries must be [r_low, r_high]");
          const auto lo = Section::scalar<std::size_t>(p[0], "rankgap.pairs");
          const auto hi = Section::scalar<std::size_t>(p[1], "rankgap.pairs");
          if (lo == 0 || lo >= hi) fail(p, "rankgap.pairs", "entries must satisfy 1 <= r_low < r_high");
          c.pairs.emplace_back(lo, hi);
        }
      }
    }

    if (c.task.source == data::Source::kMnist) {
      if (c.task.mnist_images.empty()) throw ConfigError("missing required field 'data.mnist_images'");
      if (c.task.mnist_labels.empty()) throw ConfigError("missing required field 'data.mnist_labels'");
    }
    if (c.kind == Kind::kMnistRact && c.task.source != data::Source::kMnist) {
      throw ConfigError("'data.source' must be mnist for kind mnist-ract");
    }
    if (c.kind == Kind::kRanksweep && c.task.label_mode != data::LabelMode::kTeacher) {
      throw ConfigError("'data.label_mode' must be teacher for kind ranksweep");
    }
    c.ract.phase1 = c.train;
    c.ract.lora_alpha = c.lora_alpha;
    c.ract.dropout = c.dropout;
    return c;
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

ExperimentConfig parse_config(const std::filesystem::path& path, std::optional<Kind> cli_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str(), cli_kind);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace loralab::cli
