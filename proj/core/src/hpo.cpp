#include "litgraph/hpo.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "litgraph/embeddings.hpp"
#include "litgraph/error.hpp"

namespace litgraph {

double ParamRange::sample(Rng& rng) const {
  switch (kind) {
    case Kind::integer: {
      const auto lo = static_cast<long>(low);
      const auto span = static_cast<std::uint64_t>(static_cast<long>(high) - lo + 1);
      return static_cast<double>(lo + static_cast<long>(rng.below(span)));
    }
    case Kind::real:
      if (log_scale) return std::exp(rng.uniform(std::log(low), std::log(high)));
      return rng.uniform(low, high);
    case Kind::categorical:
      return choices[rng.below(choices.size())];
  }
  return low;
}

bool ParamRange::contains(double value) const {
  if (kind == Kind::categorical) return std::find(choices.begin(), choices.end(), value) != choices.end();
  if (kind == Kind::integer && value != std::floor(value)) return false;
  return value >= low && value <= high;
}

std::optional<double> TrialConfig::get(std::string_view name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  return std::nullopt;
}

void SearchSpace::check_new(const std::string& name) const {
  if (name.empty()) throw InputError("search space parameter needs a name");
  for (const auto& p : params_) {
    if (p.name == name) throw InputError("duplicate search space parameter " + name);
  }
}

SearchSpace& SearchSpace::add_integer(std::string name, long low, long high) {
  check_new(name);
  if (low > high) throw InputError("empty integer range for " + name);
  ParamRange p;
  p.name = std::move(name);
  p.kind = ParamRange::Kind::integer;
  p.low = static_cast<double>(low);
  p.high = static_cast<double>(high);
  params_.push_back(std::move(p));
  return *this;
}

SearchSpace& SearchSpace::add_real(std::string name, double low, double high, bool log_scale) {
  check_new(name);
  if (!std::isfinite(low) || !std::isfinite(high) || low > high) throw InputError("empty real range for " + name);
  if (log_scale && low <= 0.0) throw InputError("log-scale range for " + name + " must be strictly positive");
  ParamRange p;
  p.name = std::move(name);
  p.kind = ParamRange::Kind::real;
  p.low = low;
  p.high = high;
  p.log_scale = log_scale;
  params_.push_back(std::move(p));
  return *this;
}

SearchSpace& SearchSpace::add_categorical(std::string name, std::vector<double> choices) {
  check_new(name);
  if (choices.empty()) throw InputError("no choices for " + name);
  ParamRange p;
  p.name = std::move(name);
  p.kind = ParamRange::Kind::categorical;
  p.choices = std::move(choices);
  params_.push_back(std::move(p));
  return *this;
}

TrialConfig SearchSpace::sample(Rng& rng) const {
  TrialConfig c;
  for (const auto& p : params_) c.values.emplace_back(p.name, p.sample(rng));
  return c;
}

SearchSpace SearchSpace::shallow_default() {
  SearchSpace s;
  s.add_integer("walks_per_node", 5, 40)
      .add_integer("walk_length", 10, 80)
      .add_integer("window", 2, 10)
      .add_categorical("dimension", {32, 64, 128});
  return s;
}

SearchSpace SearchSpace::rgcn_default() {
  SearchSpace s;
  s.add_categorical("hidden_dim", {16, 32, 64})
      .add_real("weight_decay", 1e-6, 1e-2, true)
      .add_real("learning_rate", 1e-4, 1e-1, true);
  return s;
}

SearchSpace SearchSpace::default_for(ModelKind kind) {
  return kind == ModelKind::rgcn ? rgcn_default() : shallow_default();
}

StudyResult run_search(const SearchSpace& space, int n_trials, std::uint64_t seed, const Objective& objective,
                       unsigned threads) {
  if (n_trials < 1) throw InputError("n_trials must be >= 1");
  if (space.empty()) throw InputError("empty search space");

  StudyResult study;
  Rng rng(derive_seed(seed, 0x4790));
  for (int i = 0; i < n_trials; ++i) {
    TrialRecord r;
    r.index = static_cast<std::size_t>(i);
    r.config = space.sample(rng);
    study.trials.push_back(std::move(r));
  }

  auto run_one = [&](TrialRecord& r) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const double value = objective(r.config);
      if (std::isfinite(value)) {
        r.objective = value;
      } else {
        r.failure = "non-finite objective";
      }
    } catch (const std::exception& e) {
      r.failure = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_trials)));
  if (workers == 1) {
    for (auto& r : study.trials) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < study.trials.size(); i = next++) run_one(study.trials[i]);
      });
    }
  }

  std::optional<std::size_t> best;
  std::string notes;
  for (const auto& r : study.trials) {
    if (!r.objective) {
      notes += "\n  trial " + std::to_string(r.index) + ": " + r.failure;
      continue;
    }
    if (!best || *r.objective > *study.trials[*best].objective) best = r.index;
  }
  if (!best) throw Error("all " + std::to_string(n_trials) + " trials failed:" + notes);
  study.best_index = *best;
  return study;
}

void apply_trial(ModelSettings& settings, ModelKind kind, const TrialConfig& trial) {
  auto as_int = [](double v) { return static_cast<int>(std::lround(v)); };
  for (const auto& [name, value] : trial.values) {
    if (kind == ModelKind::rgcn) {
      auto& c = settings.rgcn;
      if (name == "hidden_dim") c.hidden_dim = as_int(value);
      else if (name == "weight_decay") c.weight_decay = value;
      else if (name == "learning_rate") c.learning_rate = value;
      else if (name == "num_layers") c.num_layers = as_int(value);
      else if (name == "num_bases") c.num_bases = as_int(value);
      else if (name == "epochs") c.epochs = as_int(value);
      else throw InputError("parameter " + name + " does not apply to rgcn");
      continue;
    }
    std::vector<ShallowSettings*> targets;
    if (kind != ModelKind::brw) targets.push_back(&settings.deepwalk);
    if (kind != ModelKind::deepwalk) targets.push_back(&settings.brw);
    for (auto* s : targets) {
      if (name == "walks_per_node") s->walk.walks_per_node = as_int(value);
      else if (name == "walk_length") s->walk.walk_length = as_int(value);
      else if (name == "window") s->skipgram.window = as_int(value);
      else if (name == "dimension") s->skipgram.dimension = as_int(value);
      else if (name == "negatives") s->skipgram.negatives_per_pair = as_int(value);
      else if (name == "epochs") s->skipgram.epochs = as_int(value);
      else if (name == "learning_rate") s->skipgram.learning_rate = value;
      else throw InputError("parameter " + name + " does not apply to " + std::string(model_key(kind)));
    }
  }
}

StudyResult run_model_search(ModelKind kind, const KnowledgeGraph& graph, const DataSplit& split,
                             const SearchSpace& space, int n_trials, std::uint64_t seed,
                             const ModelSettings& base, unsigned threads) {
  // Reject names that do not map onto the model before any training.
  {
    ModelSettings probe = base;
    Rng rng(seed);
    apply_trial(probe, kind, space.sample(rng));
  }
  const std::uint64_t negative_seed = derive_seed(seed, 0xA0C);
  return run_search(
      space, n_trials, seed,
      [&](const TrialConfig& trial) {
        ModelSettings s = base;
        s.threads = threads > 1 ? 1 : base.threads;
        apply_trial(s, kind, trial);
        const TrainedModel model = train_model(kind, graph, split, s);
        return validation_auc(model, graph, split, negative_seed);
      },
      threads);
}

void write_study_csv(std::ostream& out, const StudyResult& study) {
  out << "index";
  if (!study.trials.empty()) {
    for (const auto& [name, _] : study.trials.front().config.values) out << ',' << name;
  }
  out << ",objective,seconds,status\n";
  for (const auto& r : study.trials) {
    out << r.index;
    for (const auto& [_, v] : r.config.values) out << ',' << format_number(v);
    out << ',' << (r.objective ? format_number(*r.objective) : "") << ',' << format_number(r.seconds) << ',';
    if (r.objective) {
      out << (r.index == study.best_index ? "best" : "ok");
    } else {
      std::string note = r.failure;
      for (auto& c : note) {
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      }
      out << "failed: " << note;
    }
    out << '\n';
  }
}

}  // namespace litgraph
