#include "chatmood/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace chatmood {

using nlohmann::json;

std::string_view to_string(CorpusSource s) {
  return s == CorpusSource::zulip_export ? "zulip-export" : "generic-jsonl";
}

CorpusSource corpus_source_from_string(std::string_view s) {
  if (s == "zulip-export") return CorpusSource::zulip_export;
  if (s == "generic-jsonl") return CorpusSource::generic_jsonl;
  throw ValueError("unknown corpus source \"" + std::string(s) + "\"");
}

Corpus::Corpus(std::vector<Message> messages, CorpusSource source)
    : messages_(std::move(messages)), source_(source) {
  std::stable_sort(messages_.begin(), messages_.end(),
                   [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
  std::set<std::string> seen;
  for (const Message& m : messages_) {
    if (m.timestamp <= 0)
      throw SchemaError("message id \"" + m.id + "\": timestamp must be > 0");
    if (!seen.insert(m.id).second)
      throw DuplicateIdError("duplicate message id \"" + m.id + "\"");
  }
}

std::pair<std::int64_t, std::int64_t> Corpus::span() const {
  if (messages_.empty()) return {0, 0};
  return {messages_.front().timestamp, messages_.back().timestamp};
}

namespace {

std::string id_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  throw SchemaError("id must be a string or an integer");
}

std::int64_t timestamp_from(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw SchemaError(where + ": key \"timestamp\" must be an integer");
  return v.get<std::int64_t>();
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing key \"" + std::string(key) + "\"");
  return *it;
}

// First present key out of a preference list.
const json* find_any(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = obj.find(k);
    if (it != obj.end()) return &*it;
  }
  return nullptr;
}

}  // namespace

Corpus parse_zulip_export(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level: expected a JSON object");
  const json& messages = require_key(doc, "messages", "top level");
  if (!messages.is_array()) throw SchemaError("top level: key \"messages\" must be an array");

  std::map<std::string, std::string> name_pseudonyms;
  std::vector<Message> out;
  out.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const json& m = messages[i];
    const std::string where = "message " + std::to_string(i);
    if (!m.is_object()) throw SchemaError(where + ": expected an object");

    Message msg;
    msg.id = id_to_string(require_key(m, "id", where));

    // sender_id is already opaque; names are pseudonymized at the boundary.
    if (const json* sid = find_any(m, {"sender_id"})) {
      msg.sender = "sender_" + id_to_string(*sid);
    } else if (const json* name = find_any(m, {"sender_full_name"})) {
      if (!name->is_string()) throw SchemaError(where + ": key \"sender_full_name\" must be a string");
      auto [it, inserted] = name_pseudonyms.try_emplace(
          name->get<std::string>(), "sender_" + std::to_string(name_pseudonyms.size() + 1));
      (void)inserted;
      msg.sender = it->second;
    } else {
      throw SchemaError(where + ": missing key \"sender_full_name\" or \"sender_id\"");
    }

    msg.timestamp = timestamp_from(require_key(m, "timestamp", where), where);
    if (msg.timestamp <= 0) throw SchemaError(where + ": \"timestamp\" must be > 0");

    const json* topic = find_any(m, {"subject", "topic"});
    if (!topic) throw SchemaError(where + ": missing key \"subject\" or \"topic\"");
    if (!topic->is_string()) throw SchemaError(where + ": topic must be a string");
    msg.topic = topic->get<std::string>();

    const json* stream = find_any(m, {"display_recipient", "stream"});
    if (!stream) throw SchemaError(where + ": missing key \"display_recipient\" or \"stream\"");
    if (!stream->is_string()) throw SchemaError(where + ": stream must be a string");
    msg.stream = stream->get<std::string>();

    const json& content = require_key(m, "content", where);
    if (!content.is_string()) throw SchemaError(where + ": key \"content\" must be a string");
    msg.content = content.get<std::string>();
    msg.removed_by_cleaning = msg.content.empty();

    out.push_back(std::move(msg));
  }
  return Corpus(std::move(out), CorpusSource::zulip_export);
}

Corpus parse_generic_jsonl(std::istream& in) {
  std::vector<Message> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json m;
    try {
      m = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!m.is_object()) throw SchemaError(where + ": expected an object");

    Message msg;
    msg.id = id_to_string(require_key(m, "id", where));
    const json& sender = require_key(m, "sender", where);
    if (!sender.is_string()) throw SchemaError(where + ": key \"sender\" must be a string");
    msg.sender = sender.get<std::string>();
    msg.timestamp = timestamp_from(require_key(m, "timestamp", where), where);
    if (msg.timestamp <= 0) throw SchemaError(where + ": \"timestamp\" must be > 0");
    for (auto [field, key] : {std::pair<std::string*, const char*>{&msg.stream, "stream"},
                              {&msg.topic, "topic"},
                              {&msg.content, "content"}}) {
      const json& v = require_key(m, key, where);
      if (!v.is_string()) throw SchemaError(where + ": key \"" + key + "\" must be a string");
      *field = v.get<std::string>();
    }
    msg.removed_by_cleaning = msg.content.empty();
    out.push_back(std::move(msg));
  }
  return Corpus(std::move(out), CorpusSource::generic_jsonl);
}

}  // namespace chatmood
