// Canonical message store: parsing chat exports into a source-agnostic corpus.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chatmood/errors.hpp"

namespace chatmood {

enum class CorpusSource : std::uint8_t { zulip_export, generic_jsonl };

std::string_view to_string(CorpusSource s);
CorpusSource corpus_source_from_string(std::string_view s);

/// One raw chat message. Senders are opaque pseudonyms from ingestion onward.
struct Message {
  std::string id;
  std::string sender;
  std::int64_t timestamp = 0;  // UTC seconds, > 0
  std::string stream;
  std::string topic;
  std::string content;  // raw markup
  // Empty content is only legal when the message is flagged removed.
  bool removed_by_cleaning = false;

  bool operator==(const Message&) const = default;
};

/// Immutable, time-ordered message store. Safe for concurrent reads.
class Corpus {
 public:
  Corpus() = default;

  /// Sorts by timestamp (stable) and enforces id uniqueness and timestamp > 0.
  Corpus(std::vector<Message> messages, CorpusSource source);

  const std::vector<Message>& messages() const { return messages_; }
  CorpusSource source() const { return source_; }
  bool empty() const { return messages_.empty(); }
  std::size_t size() const { return messages_.size(); }

  /// [min timestamp, max timestamp]; {0, 0} for an empty corpus.
  std::pair<std::int64_t, std::int64_t> span() const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Message> messages_;
  CorpusSource source_ = CorpusSource::generic_jsonl;
};

/// Parses a Zulip export: a JSON document with a top-level "messages" array.
/// Accepts both export key spellings ("subject"/"topic",
/// "display_recipient"/"stream", "sender_full_name"/"sender_id"). Name-based
/// senders are replaced by "sender_k" pseudonyms in order of first appearance.
Corpus parse_zulip_export(std::istream& in);

/// Parses the generic schema: one JSON object per line with keys
/// id, sender, timestamp, stream, topic, content.
Corpus parse_generic_jsonl(std::istream& in);

}  // namespace chatmood
