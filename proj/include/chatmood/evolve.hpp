// Evolutionary hyperparameter search and the repeated-split validation harness.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chatmood/classify.hpp"

namespace chatmood {

/// One hyperparameter gene: unit values map onto [lo, hi], linearly or
/// log-uniformly; integer genes round after decoding.
struct GeneSpec {
  const char* name;
  double lo;
  double hi;
  bool log_scale;
  bool integer;
};

/// The twelve gene specs, one per hyperparameter field, in decode order.
const std::vector<GeneSpec>& gene_specs();

/// Unit-space genome: operators stay within [0,1], so every decoded value
/// stays within its declared range by construction.
struct Genome {
  std::vector<double> genes;  // size gene_specs().size(), each in [0,1]

  Hyperparameters decode() const;

  bool operator==(const Genome&) const = default;
};

/// Content hash of the decoded hyperparameters (over their JSON bytes), so
/// fitness seeds do not depend on evaluation order.
std::uint64_t genome_hash(const Genome& genome);

struct EvolutionConfig {
  int population_size = 20;
  int generations = 80;
  int tournament_size = 3;
  int elitism_count = 1;
  double mutation_rate = 0.2;   // per gene
  double crossover_rate = 0.5;  // per gene, chance of the second parent's gene
  int fitness_splits = 5;
  double test_fraction = 0.1;   // the 10 of the 10:90 split
  std::uint64_t seed = 0;

  /// Throws ValueError on an out-of-range field.
  void validate() const;

  bool operator==(const EvolutionConfig&) const = default;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Genome best_genome;

  bool operator==(const GenerationStats&) const = default;
};

/// Row 0 describes the random initial population, so a run with G
/// generations yields G + 1 rows. With elitism, best_fitness never drops.
struct EvolutionHistory {
  std::vector<GenerationStats> rows;

  bool operator==(const EvolutionHistory&) const = default;
};

/// generation,best_fitness,mean_fitness,best_genome — the genome as a quoted
/// JSON column of its decoded hyperparameters.
std::string history_to_csv(const EvolutionHistory& history);

/// Deterministic stratified split: per class, round(count * test_fraction)
/// shuffled samples go to test; both halves keep the input order. A class
/// left without training samples, or an empty test set, is an error.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);

struct FitnessDiagnostic {
  std::vector<double> split_accuracies;
  std::string error;  // set when a fold failed and fitness collapsed to 0
};

/// Mean test accuracy of the full train-ensemble pipeline over
/// fitness_splits stratified splits, split seeds derived from
/// (config.seed, genome hash). Any fold's training failure yields 0.
double fitness(const Genome& genome, const Dataset& data, const EvolutionConfig& config,
               FitnessDiagnostic* diagnostic = nullptr);

struct EvolutionResult {
  EnsembleModel best;
  EvolutionHistory history;
};

/// Tournament selection, per-gene uniform crossover, per-gene uniform
/// mutation on the gene's scale, elitism. The best final genome is
/// retrained on one last (1 - test_fraction) training split.
EvolutionResult run_evolution(const Dataset& data, const EvolutionConfig& config);

struct CrossValidation {
  std::vector<double> accuracies;     // one per repeat
  double mean = 0.0;
  double stddev = 0.0;                // population standard deviation
  std::vector<std::string> warnings;  // repeats whose training failed (scored 0)
};

/// Repeated independent stratified splits with a full retrain each time.
CrossValidation cross_validate(const Hyperparameters& hp, const Dataset& data, int repeats,
                               double test_fraction, std::uint64_t seed);

}  // namespace chatmood
