// Evolutionary search over unit-space genomes, plus the validation harness.
#include "chatmood/evolve.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "chatmood/artifact_io.hpp"
#include "chatmood/seeds.hpp"

namespace chatmood {
namespace {

/// 53-bit uniform double in [0,1); avoids std distributions so streams are
/// reproducible across standard libraries.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double decode_value(const GeneSpec& spec, double unit) {
  double value = spec.log_scale ? spec.lo * std::pow(spec.hi / spec.lo, unit)
                                : spec.lo + (spec.hi - spec.lo) * unit;
  value = std::clamp(value, spec.lo, spec.hi);
  return spec.integer ? std::round(value) : value;
}

nlohmann::json decoded_json(const Genome& genome) { return genome.decode(); }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Shortest round-trip decimal form, identical on every run.
std::string number_field(double x) { return nlohmann::json(x).dump(); }

double test_accuracy(const EnsembleModel& model, const Dataset& test) {
  int correct = 0;
  for (const DataPoint& p : test) correct += model.predict(p).label == p.label;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace

const std::vector<GeneSpec>& gene_specs() {
  static const std::vector<GeneSpec> specs = {
      {"n_trees", 5, 200, true, true},
      {"max_depth", 2, 20, false, true},
      {"min_leaf", 1, 8, false, true},
      {"feature_subsample_fraction", 0.1, 1.0, false, false},
      {"l2_lambda", 1e-6, 1e-1, true, false},
      {"epochs", 5, 50, false, true},
      {"learning_rate", 1e-3, 1.0, true, false},
      {"variance_smoothing", 1e-12, 1e-3, true, false},
      {"ngram_max", 1, 2, false, true},
      {"tfidf_enabled", 0, 1, false, true},
      {"vocab_cap", 50, 2000, true, true},
      {"prune_threshold", 0.5, 1.0, false, false},
  };
  return specs;
}

Hyperparameters Genome::decode() const {
  const auto& specs = gene_specs();
  if (genes.size() != specs.size())
    throw ValueError("genome has " + std::to_string(genes.size()) + " genes, expected " +
                     std::to_string(specs.size()));
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (!(genes[i] >= 0.0 && genes[i] <= 1.0))
      throw ValueError(std::string("gene \"") + specs[i].name + "\" outside [0,1]");
  }
  auto value = [&](int i) { return decode_value(specs[static_cast<std::size_t>(i)], genes[static_cast<std::size_t>(i)]); };
  Hyperparameters hp;
  hp.forest.n_trees = static_cast<int>(value(0));
  hp.forest.max_depth = static_cast<int>(value(1));
  hp.forest.min_leaf = static_cast<int>(value(2));
  hp.forest.feature_subsample_fraction = value(3);
  hp.svm.l2_lambda = value(4);
  hp.svm.epochs = static_cast<int>(value(5));
  hp.svm.learning_rate = value(6);
  hp.nb.variance_smoothing = value(7);
  hp.features.ngram_max = static_cast<int>(value(8));
  hp.features.tfidf_enabled = value(9) >= 0.5;
  hp.features.vocab_cap = static_cast<int>(value(10));
  hp.features.prune_threshold = value(11);
  return hp;
}

std::uint64_t genome_hash(const Genome& genome) {
  const std::string bytes = decoded_json(genome).dump();
  return fnv1a(bytes.data(), bytes.size());
}

void EvolutionConfig::validate() const {
  if (population_size < 2) throw ValueError("population_size must be >= 2");
  if (generations < 0) throw ValueError("generations must be >= 0");
  if (tournament_size < 1) throw ValueError("tournament_size must be >= 1");
  if (elitism_count < 0 || elitism_count >= population_size)
    throw ValueError("elitism_count must be in [0, population_size)");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    throw ValueError("mutation_rate must be in [0,1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
    throw ValueError("crossover_rate must be in [0,1]");
  if (fitness_splits < 1) throw ValueError("fitness_splits must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValueError("test_fraction must be in (0,1)");
}

std::string history_to_csv(const EvolutionHistory& history) {
  std::string out = "generation,best_fitness,mean_fitness,best_genome\n";
  for (const GenerationStats& row : history.rows) {
    out += std::to_string(row.generation);
    out += ',';
    out += number_field(row.best_fitness);
    out += ',';
    out += number_field(row.mean_fitness);
    out += ',';
    out += csv_quote(decoded_json(row.best_genome).dump());
    out += '\n';
  }
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValueError("stratified_split: test_fraction must be in (0,1)");
  if (data.empty()) throw ValueError("stratified_split: empty data");

  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t i = 0; i < data.size(); ++i)
    by_class[static_cast<std::size_t>(class_index(data[i].label))].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<char> in_test(data.size(), 0);
  for (LabelClass c : kAllClasses) {
    auto& indices = by_class[static_cast<std::size_t>(class_index(c))];
    if (indices.empty()) continue;
    for (std::size_t i = indices.size() - 1; i > 0; --i)
      std::swap(indices[i], indices[rng() % (i + 1)]);
    const auto n_test = static_cast<std::size_t>(
        std::lround(static_cast<double>(indices.size()) * test_fraction));
    if (indices.size() == n_test)
      throw ValueError(std::string("stratified_split: class \"") + std::string(to_string(c)) +
                       "\" left without training samples");
    for (std::size_t i = 0; i < n_test; ++i) in_test[indices[i]] = 1;
  }

  Dataset train;
  Dataset test;
  for (std::size_t i = 0; i < data.size(); ++i) (in_test[i] ? test : train).push_back(data[i]);
  if (test.empty()) throw ValueError("stratified_split: test set is empty");
  return {std::move(train), std::move(test)};
}

double fitness(const Genome& genome, const Dataset& data, const EvolutionConfig& config,
               FitnessDiagnostic* diagnostic) {
  if (data.empty()) throw ValueError("fitness: empty data");
  FitnessDiagnostic local;
  FitnessDiagnostic& diag = diagnostic ? *diagnostic : local;
  diag = {};

  const Hyperparameters hp = genome.decode();
  const std::uint64_t hash = genome_hash(genome);
  double sum = 0.0;
  for (int s = 0; s < config.fitness_splits; ++s) {
    const std::uint64_t split_seed = derive_seed(config.seed, hash, static_cast<std::uint64_t>(s));
    try {
      auto [train, test] = stratified_split(data, config.test_fraction, split_seed);
      const EnsembleModel model = train_ensemble(train, hp, derive_seed(split_seed, 1));
      const double accuracy = test_accuracy(model, test);
      diag.split_accuracies.push_back(accuracy);
      sum += accuracy;
    } catch (const Error& e) {
      diag.split_accuracies.clear();
      diag.error = e.what();
      return 0.0;
    }
  }
  return sum / static_cast<double>(config.fitness_splits);
}

EvolutionResult run_evolution(const Dataset& data, const EvolutionConfig& config) {
  config.validate();
  if (data.empty()) throw ValueError("run_evolution: empty data");

  const std::size_t n_genes = gene_specs().size();
  const auto pop_size = static_cast<std::size_t>(config.population_size);
  std::mt19937_64 rng(derive_seed(config.seed, 0xEA));

  std::vector<Genome> population(pop_size);
  for (Genome& g : population) {
    g.genes.resize(n_genes);
    for (double& x : g.genes) x = unit_double(rng);
  }
  std::vector<double> fit(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) fit[i] = fitness(population[i], data, config);

  EvolutionHistory history;
  auto record = [&](int generation) {
    GenerationStats row;
    row.generation = generation;
    std::size_t best = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      sum += fit[i];
      if (fit[i] > fit[best]) best = i;
    }
    row.best_fitness = fit[best];
    row.mean_fitness = sum / static_cast<double>(pop_size);
    row.best_genome = population[best];
    history.rows.push_back(std::move(row));
  };
  record(0);

  auto tournament = [&]() -> std::size_t {
    std::size_t best = rng() % pop_size;
    for (int k = 1; k < config.tournament_size; ++k) {
      const std::size_t challenger = rng() % pop_size;
      if (fit[challenger] > fit[best]) best = challenger;
    }
    return best;
  };

  for (int gen = 1; gen <= config.generations; ++gen) {
    std::vector<std::size_t> order(pop_size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    std::vector<Genome> next;
    std::vector<double> next_fit;
    next.reserve(pop_size);
    for (int e = 0; e < config.elitism_count; ++e) {
      next.push_back(population[order[static_cast<std::size_t>(e)]]);
      next_fit.push_back(fit[order[static_cast<std::size_t>(e)]]);
    }
    while (next.size() < pop_size) {
      const Genome& a = population[tournament()];
      const Genome& b = population[tournament()];
      Genome child;
      child.genes.resize(n_genes);
      for (std::size_t g = 0; g < n_genes; ++g)
        child.genes[g] = unit_double(rng) < config.crossover_rate ? b.genes[g] : a.genes[g];
      for (std::size_t g = 0; g < n_genes; ++g) {
        if (unit_double(rng) < config.mutation_rate) child.genes[g] = unit_double(rng);
      }
      next_fit.push_back(fitness(child, data, config));
      next.push_back(std::move(child));
    }
    population = std::move(next);
    fit = std::move(next_fit);
    record(gen);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < pop_size; ++i) {
    if (fit[i] > fit[best]) best = i;
  }
  auto [train, test] = stratified_split(data, config.test_fraction, derive_seed(config.seed, 0xF1));
  EvolutionResult result{train_ensemble(train, population[best].decode(), derive_seed(config.seed, 0xF2)),
                         std::move(history)};
  return result;
}

CrossValidation cross_validate(const Hyperparameters& hp, const Dataset& data, int repeats,
                               double test_fraction, std::uint64_t seed) {
  if (repeats < 1) throw ValueError("cross_validate: repeats must be >= 1");
  hp.validate();
  CrossValidation cv;
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t split_seed = derive_seed(seed, 0xCF, static_cast<std::uint64_t>(r));
    try {
      auto [train, test] = stratified_split(data, test_fraction, split_seed);
      const EnsembleModel model = train_ensemble(train, hp, derive_seed(split_seed, 1));
      cv.accuracies.push_back(test_accuracy(model, test));
    } catch (const Error& e) {
      cv.accuracies.push_back(0.0);
      cv.warnings.push_back("repeat " + std::to_string(r) + ": " + e.what());
    }
  }
  cv.mean = std::accumulate(cv.accuracies.begin(), cv.accuracies.end(), 0.0) /
            static_cast<double>(cv.accuracies.size());
  double ss = 0.0;
  for (double a : cv.accuracies) ss += (a - cv.mean) * (a - cv.mean);
  cv.stddev = std::sqrt(ss / static_cast<double>(cv.accuracies.size()));
  return cv;
}

}  // namespace chatmood
