// Message preparation: markup cleaning, sentence segmentation, spell
// correction, and anonymization.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chatmood/corpus.hpp"

namespace chatmood {

/// The unit of analysis: one segmented sentence of a cleaned message.
struct Sentence {
  std::string message_id;
  int index = 0;         // position within the message
  std::string raw;       // verbatim segment of the cleaned message text
  std::string clean;     // trimmed segment, single-spaced
  std::vector<std::string> tokens;  // whitespace tokens of clean

  std::string id() const { return message_id + ":" + std::to_string(index); }

  bool operator==(const Sentence&) const = default;
};

/// Removes chat markup: fenced and inline code spans disappear entirely,
/// emphasis markers (*, _, **, __) are stripped keeping the inner text,
/// bare and markdown links are dropped, and whitespace is collapsed.
/// Total and idempotent; an all-markup message yields "".
std::string clean(const std::string& content);

struct SplitOptions {
  // Abbreviations never end a sentence ("e.g.", "z.B.", "p.m.", ...).
  std::vector<std::string> abbreviations;
  // Emoticon glyphs never end a sentence.
  std::vector<std::string> emoticons;
};

SplitOptions default_split_options();

/// Loads one abbreviation per line; '#' lines are comments.
std::vector<std::string> load_abbreviations(std::istream& in);
std::vector<std::string> load_abbreviations_file(const std::string& path);

/// Segments cleaned text into sentences. Boundaries sit at ., !, ? followed
/// by whitespace and an uppercase letter, or at end of text; terminators
/// inside abbreviations or emoticons never split. Empty input yields an
/// empty list; boundary-free text yields exactly one sentence.
std::vector<Sentence> split_sentences(const std::string& cleaned,
                                      const std::string& message_id = "",
                                      const SplitOptions& options = default_split_options());

/// Word -> frequency dictionary for spell correction.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::map<std::string, std::uint64_t> words) : words_(std::move(words)) {}

  static Dictionary parse(std::istream& in);
  static Dictionary load(const std::string& path);

  bool contains(const std::string& word) const { return words_.count(word) != 0; }
  std::uint64_t frequency(const std::string& word) const;
  bool empty() const { return words_.empty(); }
  std::size_t size() const { return words_.size(); }
  const std::map<std::string, std::uint64_t>& words() const { return words_; }

 private:
  std::map<std::string, std::uint64_t> words_;
};

struct SpellResult {
  std::string token;
  bool was_corrected = false;
};

/// In-dictionary tokens pass through unflagged. Otherwise the best candidate
/// within edit distance 2 wins (distance 1 preferred, then higher frequency,
/// then lexicographic order); with no candidate the token stays, flagged.
SpellResult correct_spelling(const std::string& token, const Dictionary& dictionary);

/// Stable surface-form -> placeholder mapping ("[[person_k]]", "[[email_k]]",
/// "[[link_k]]"). Persisted separately from the corpus.
class PseudonymMap {
 public:
  PseudonymMap() = default;

  /// Restores a persisted mapping. Placeholders must be unique per kind.
  PseudonymMap(std::map<std::string, std::string> persons,
               std::map<std::string, std::string> emails,
               std::map<std::string, std::string> links);

  std::string person_placeholder(const std::string& name);
  std::string email_placeholder(const std::string& address);
  std::string link_placeholder(const std::string& url);

  const std::map<std::string, std::string>& persons() const { return persons_; }
  const std::map<std::string, std::string>& emails() const { return emails_; }
  const std::map<std::string, std::string>& links() const { return links_; }

  bool operator==(const PseudonymMap&) const = default;

 private:
  std::map<std::string, std::string> persons_;
  std::map<std::string, std::string> emails_;
  std::map<std::string, std::string> links_;
};

/// Replaces e-mail addresses, URLs, chat mentions (@**Name** and @Name), and
/// roster names with placeholders. Identical surface forms reuse placeholders.
std::string anonymize(const std::string& text, const std::vector<std::string>& known_names,
                      PseudonymMap& map);

/// One message after the full preparation chain.
struct PreparedMessage {
  std::string id;
  std::string sender;
  std::int64_t timestamp = 0;
  std::string stream;
  std::string topic;
  std::string clean_text;  // cleaned + anonymized message text
  bool removed_by_cleaning = false;
  std::vector<Sentence> sentences;

  bool operator==(const PreparedMessage&) const = default;
};

/// The preprocessed analysis store for one corpus.
struct SentenceStore {
  std::vector<PreparedMessage> messages;

  std::size_t sentence_count() const;
  std::size_t removed_count() const;
  const Sentence* find_sentence(const std::string& sentence_id) const;
  const PreparedMessage* find_message(const std::string& message_id) const;

  bool operator==(const SentenceStore&) const = default;
};

struct PreprocessOptions {
  SplitOptions split = default_split_options();
  std::vector<std::string> roster;  // known names for anonymization
};

/// clean -> anonymize -> split for every message, updating the pseudonym map.
SentenceStore prepare_corpus(const Corpus& corpus, const PreprocessOptions& options,
                             PseudonymMap& pseudonyms);

}  // namespace chatmood
