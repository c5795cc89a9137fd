#include "chatmood/config.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "chatmood/artifact_io.hpp"
#include "chatmood/errors.hpp"

namespace chatmood {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad_value(int line_no, const std::string& key, const std::string& value) {
  throw ConfigError("line " + std::to_string(line_no) + ": bad value \"" + value + "\" for " +
                    key);
}

template <typename Parse>
auto number(const std::string& value, int line_no, const std::string& key, Parse parse) {
  std::size_t used = 0;
  try {
    auto result = parse(value, &used);
    if (used != value.size()) bad_value(line_no, key, value);
    return result;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(line_no, key, value);
  }
}

bool plain_name(const std::string& s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  }
  return true;
}

}  // namespace

void RunConfig::validate() const {
  if (!plain_name(name))
    throw ConfigError("run name must be non-empty and use only [A-Za-z0-9_.-]: \"" + name + "\"");
  if (source_kind != "zulip" && source_kind != "jsonl")
    throw ConfigError("source must be \"zulip\" or \"jsonl\", got \"" + source_kind + "\"");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (repeats < 1) throw ConfigError("repeats must be >= 1, got " + std::to_string(repeats));
  if (timezone_offset_minutes < -1440 || timezone_offset_minutes > 1440)
    throw ConfigError("timezone_offset must be within +-1440 minutes, got " +
                      std::to_string(timezone_offset_minutes));
  try {
    evolution.validate();
  } catch (const ValueError& e) {
    throw ConfigError(std::string("evolution settings: ") + e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  const std::map<std::string, std::function<void(const std::string&, int)>> setters = {
      {"name", [&](const std::string& v, int) { config.name = v; }},
      {"corpus", [&](const std::string& v, int) { config.corpus_path = v; }},
      {"source", [&](const std::string& v, int) { config.source_kind = v; }},
      {"resources", [&](const std::string& v, int) { config.resource_dir = v; }},
      {"output_dir", [&](const std::string& v, int) { config.output_dir = v; }},
      {"seed",
       [&](const std::string& v, int n) {
         config.seed = number(v, n, "seed", [](const std::string& s, std::size_t* used) {
           return std::stoull(s, used);
         });
       }},
      {"timezone_offset",
       [&](const std::string& v, int n) {
         config.timezone_offset_minutes =
             number(v, n, "timezone_offset",
                    [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"repeats",
       [&](const std::string& v, int n) {
         config.repeats = number(
             v, n, "repeats",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"population",
       [&](const std::string& v, int n) {
         config.evolution.population_size = number(
             v, n, "population",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"generations",
       [&](const std::string& v, int n) {
         config.evolution.generations = number(
             v, n, "generations",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"tournament",
       [&](const std::string& v, int n) {
         config.evolution.tournament_size = number(
             v, n, "tournament",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"elitism",
       [&](const std::string& v, int n) {
         config.evolution.elitism_count = number(
             v, n, "elitism",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"mutation_rate",
       [&](const std::string& v, int n) {
         config.evolution.mutation_rate = number(
             v, n, "mutation_rate",
             [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
       }},
      {"crossover_rate",
       [&](const std::string& v, int n) {
         config.evolution.crossover_rate = number(
             v, n, "crossover_rate",
             [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
       }},
      {"fitness_splits",
       [&](const std::string& v, int n) {
         config.evolution.fitness_splits = number(
             v, n, "fitness_splits",
             [](const std::string& s, std::size_t* used) { return std::stoi(s, used); });
       }},
      {"test_fraction",
       [&](const std::string& v, int n) {
         config.evolution.test_fraction = number(
             v, n, "test_fraction",
             [](const std::string& s, std::size_t* used) { return std::stod(s, used); });
       }},
  };

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto setter = setters.find(key);
    if (setter == setters.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key \"" + key + "\"");
    setter->second(value, line_no);
  }
  config.evolution.seed = config.seed;
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError("config \"" + path + "\": " + e.what());
  }
}

}  // namespace chatmood
