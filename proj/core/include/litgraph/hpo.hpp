#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litgraph/models.hpp"
#include "litgraph/rng.hpp"

namespace litgraph {

struct ParamRange {
  enum class Kind { integer, real, categorical };

  std::string name;
  Kind kind = Kind::real;
  double low = 0.0;
  double high = 0.0;
  bool log_scale = false;
  std::vector<double> choices;

  double sample(Rng& rng) const;
  bool contains(double value) const;
};

// Sampled values in declaration order.
struct TrialConfig {
  std::vector<std::pair<std::string, double>> values;

  std::optional<double> get(std::string_view name) const;
};

class SearchSpace {
 public:
  // Inclusive bounds. Throw InputError on empty ranges, non-positive log
  // bounds, duplicate names or empty choice lists.
  SearchSpace& add_integer(std::string name, long low, long high);
  SearchSpace& add_real(std::string name, double low, double high, bool log_scale = false);
  SearchSpace& add_categorical(std::string name, std::vector<double> choices);

  const std::vector<ParamRange>& params() const noexcept { return params_; }
  bool empty() const noexcept { return params_.empty(); }

  TrialConfig sample(Rng& rng) const;

  // walks_per_node [5,40], walk_length [10,80], window [2,10],
  // dimension {32,64,128}.
  static SearchSpace shallow_default();
  // hidden_dim {16,32,64}, weight_decay log [1e-6,1e-2],
  // learning_rate log [1e-4,1e-1].
  static SearchSpace rgcn_default();
  static SearchSpace default_for(ModelKind kind);

 private:
  void check_new(const std::string& name) const;

  std::vector<ParamRange> params_;
};

struct TrialRecord {
  std::size_t index = 0;
  TrialConfig config;
  std::optional<double> objective;  // empty when the trial failed
  double seconds = 0.0;
  std::string failure;
};

struct StudyResult {
  std::vector<TrialRecord> trials;
  std::size_t best_index = 0;

  const TrialRecord& best() const { return trials.at(best_index); }
};

using Objective = std::function<double(const TrialConfig&)>;

// Configs are drawn up front from one stream seeded by `seed`, so the study
// does not depend on how trials are scheduled. A trial that throws or returns
// a non-finite value is recorded as failed. The best trial is the first one
// reaching the maximum objective. Throws Error with every failure note when
// no trial succeeds.
StudyResult run_search(const SearchSpace& space, int n_trials, std::uint64_t seed, const Objective& objective,
                       unsigned threads = 1);

// Overwrites the fields named in `trial` for `kind` (both shallow blocks for
// hybrid). Unknown names raise InputError.
void apply_trial(ModelSettings& settings, ModelKind kind, const TrialConfig& trial);

// Trains `kind` per trial and scores validation AUC.
StudyResult run_model_search(ModelKind kind, const KnowledgeGraph& graph, const DataSplit& split,
                             const SearchSpace& space, int n_trials, std::uint64_t seed,
                             const ModelSettings& base, unsigned threads = 1);

// index,<param...>,objective,seconds,status
void write_study_csv(std::ostream& out, const StudyResult& study);

}  // namespace litgraph
