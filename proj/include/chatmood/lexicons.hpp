// Language resources: polarity lexicon, emoticon polarity table, formality
// markers, and the adjective tagger used by feature extraction.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chatmood/errors.hpp"
#include "chatmood/label_class.hpp"
#include "chatmood/preprocess.hpp"

namespace chatmood {

/// One word of the merged polarity lexicon. Class-only entries carry the
/// canonical score of their class (+1, 0, -1).
struct PolarityEntry {
  std::string word;  // lowercase
  LabelClass klass = LabelClass::neutral;
  double score = 0.0;       // in [-1, 1], sign consistent with klass
  bool class_only = false;  // true when the source line had no score

  bool operator==(const PolarityEntry&) const = default;
};

/// Case-insensitive word -> polarity table. When a word appears both with and
/// without a score, the scored entry wins.
class PolarityLexicon {
 public:
  PolarityLexicon() = default;

  /// Format: word<TAB>class[<TAB>score], class in {positive,neutral,negative}.
  static PolarityLexicon parse(std::istream& in);
  static PolarityLexicon load(const std::string& path);

  void insert(PolarityEntry entry);
  std::optional<PolarityEntry> lookup(const std::string& word) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, PolarityEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, PolarityEntry> entries_;  // keyed by lowercase word
};

/// One emoticon with its class-membership probabilities.
struct EmoticonEntry {
  std::string glyph;
  double p_pos = 0.0;
  double p_neu = 0.0;
  double p_neg = 0.0;

  /// Scalar shade in [-1, 1]; neutral mass contributes nothing.
  double score() const { return p_pos - p_neg; }

  bool operator==(const EmoticonEntry&) const = default;
};

class EmoticonTable {
 public:
  EmoticonTable() = default;

  /// Format: glyph<TAB>p_pos<TAB>p_neu<TAB>p_neg; rows must sum to 1 +- 1e-9.
  static EmoticonTable parse(std::istream& in);
  static EmoticonTable load(const std::string& path);

  void insert(EmoticonEntry entry);
  std::optional<EmoticonEntry> find(const std::string& glyph) const;

  /// Argmax class and its probability; ties go to the earlier class in
  /// (positive, neutral, negative) order. Unknown glyph -> absent.
  std::optional<std::pair<LabelClass, double>> emoticon_class(const std::string& glyph) const;

  /// All glyphs, longest first (scanning order for occurrence search).
  std::vector<std::string> glyphs_longest_first() const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, EmoticonEntry>& entries() const { return entries_; }

 private:
  std::map<std::string, EmoticonEntry> entries_;
};

/// Formal/informal token patterns. Patterns containing an uppercase letter
/// match tokens case-sensitively (formal pronoun forms keep their
/// capitalization mid-sentence); all-lowercase patterns match
/// case-insensitively.
class FormalityMarkers {
 public:
  FormalityMarkers() = default;
  FormalityMarkers(std::set<std::string> formal, std::set<std::string> informal);

  /// INI-like file with "[formal]" and "[informal]" sections.
  static FormalityMarkers parse(std::istream& in);
  static FormalityMarkers load(const std::string& path);

  bool is_formal(const std::string& token) const { return matches(formal_, token); }
  bool is_informal(const std::string& token) const { return matches(informal_, token); }

  const std::set<std::string>& formal() const { return formal_; }
  const std::set<std::string>& informal() const { return informal_; }

 private:
  static bool matches(const std::set<std::string>& patterns, const std::string& token);

  std::set<std::string> formal_;
  std::set<std::string> informal_;
};

/// Pluggable part-of-speech stand-in: decides whether a token is an adjective.
class AdjectiveTagger {
 public:
  virtual ~AdjectiveTagger() = default;
  virtual bool is_adjective(const std::string& lower_token) const = 0;
};

/// Default tagger: known-word list plus suffix heuristics.
class HeuristicAdjectiveTagger : public AdjectiveTagger {
 public:
  HeuristicAdjectiveTagger() : HeuristicAdjectiveTagger({}, default_suffixes()) {}
  HeuristicAdjectiveTagger(std::set<std::string> words, std::vector<std::string> suffixes)
      : words_(std::move(words)), suffixes_(std::move(suffixes)) {}

  static std::vector<std::string> default_suffixes();

  bool is_adjective(const std::string& lower_token) const override;

 private:
  std::set<std::string> words_;
  std::vector<std::string> suffixes_;
};

/// Everything feature extraction consumes. Empty members behave as "resource
/// absent": no lexicon hits, no emoticons, spell correction disabled.
struct Resources {
  PolarityLexicon polarity;
  EmoticonTable emoticons;
  FormalityMarkers formality;
  Dictionary dictionary;
  std::shared_ptr<const AdjectiveTagger> adjectives = std::make_shared<HeuristicAdjectiveTagger>();
};

/// Loads the conventional resource directory layout: polarity.tsv,
/// emoticons.tsv, formality.ini, dictionary.txt. Absent files leave the
/// matching member empty ("resource absent"); unreadable or malformed
/// present files are errors.
Resources load_resources(const std::string& dir);

}  // namespace chatmood
