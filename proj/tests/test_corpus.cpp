#include "chatmood/corpus.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace chatmood;

namespace {

Corpus zulip(const std::string& text) {
  std::istringstream in(text);
  return parse_zulip_export(in);
}

Corpus jsonl(const std::string& text) {
  std::istringstream in(text);
  return parse_generic_jsonl(in);
}

}  // namespace

TEST(ZulipExport, ParsesMessagesAndMapsKeys) {
  Corpus c = zulip(R"({"messages": [
    {"id": 7, "sender_id": 42, "timestamp": 100, "subject": "standup",
     "display_recipient": "dev", "content": "hello"},
    {"id": "8", "sender_id": 42, "timestamp": 90, "topic": "standup",
     "stream": "dev", "content": "world"}
  ]})");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.source(), CorpusSource::zulip_export);
  // sorted by timestamp
  EXPECT_EQ(c.messages()[0].id, "8");
  EXPECT_EQ(c.messages()[1].id, "7");
  EXPECT_EQ(c.messages()[1].sender, "sender_42");
  EXPECT_EQ(c.messages()[1].stream, "dev");
  EXPECT_EQ(c.messages()[1].topic, "standup");
  EXPECT_EQ(c.messages()[1].content, "hello");
  EXPECT_EQ(c.span(), (std::pair<std::int64_t, std::int64_t>{90, 100}));
}

TEST(ZulipExport, NameSendersBecomePseudonymsInFirstAppearanceOrder) {
  Corpus c = zulip(R"({"messages": [
    {"id": 1, "sender_full_name": "Bea", "timestamp": 10, "topic": "t", "stream": "s", "content": "a"},
    {"id": 2, "sender_full_name": "Al",  "timestamp": 20, "topic": "t", "stream": "s", "content": "b"},
    {"id": 3, "sender_full_name": "Bea", "timestamp": 30, "topic": "t", "stream": "s", "content": "c"}
  ]})");
  EXPECT_EQ(c.messages()[0].sender, "sender_1");
  EXPECT_EQ(c.messages()[1].sender, "sender_2");
  EXPECT_EQ(c.messages()[2].sender, "sender_1");
}

TEST(ZulipExport, RawNamesNeverEnterTheStore) {
  Corpus c = zulip(R"({"messages": [
    {"id": 1, "sender_full_name": "Paula Peterson", "timestamp": 10,
     "topic": "t", "stream": "s", "content": "x"}
  ]})");
  EXPECT_EQ(c.messages()[0].sender.find("Paula"), std::string::npos);
  EXPECT_EQ(c.messages()[0].sender, "sender_1");
}

TEST(ZulipExport, EmptyContentIsFlaggedRemoved) {
  Corpus c = zulip(R"({"messages": [
    {"id": 1, "sender_id": 5, "timestamp": 10, "topic": "t", "stream": "s", "content": ""}
  ]})");
  EXPECT_TRUE(c.messages()[0].removed_by_cleaning);
}

TEST(ZulipExport, MalformedJsonReportsBytePosition) {
  try {
    zulip("{\"messages\": [");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(ZulipExport, MissingKeyNamesKeyAndMessage) {
  try {
    zulip(R"({"messages": [{"id": 1, "sender_id": 2, "timestamp": 10, "topic": "t", "stream": "s"}]})");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("message 0"), std::string::npos);
    EXPECT_NE(what.find("\"content\""), std::string::npos);
  }
}

TEST(ZulipExport, MissingTopLevelMessagesKey) {
  EXPECT_THROW(zulip(R"({"msgs": []})"), SchemaError);
}

TEST(ZulipExport, DuplicateIdsRejected) {
  EXPECT_THROW(zulip(R"({"messages": [
    {"id": 1, "sender_id": 2, "timestamp": 10, "topic": "t", "stream": "s", "content": "a"},
    {"id": 1, "sender_id": 2, "timestamp": 20, "topic": "t", "stream": "s", "content": "b"}
  ]})"),
               DuplicateIdError);
}

TEST(ZulipExport, NonPositiveTimestampRejected) {
  EXPECT_THROW(zulip(R"({"messages": [
    {"id": 1, "sender_id": 2, "timestamp": 0, "topic": "t", "stream": "s", "content": "a"}
  ]})"),
               SchemaError);
}

TEST(GenericJsonl, ParsesLinesSkippingBlanks) {
  Corpus c = jsonl(
      "{\"id\": \"a\", \"sender\": \"p1\", \"timestamp\": 5, \"stream\": \"s\", \"topic\": \"t\", \"content\": \"hi\"}\n"
      "\n"
      "{\"id\": \"b\", \"sender\": \"p2\", \"timestamp\": 6, \"stream\": \"s\", \"topic\": \"t\", \"content\": \"yo\"}\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.source(), CorpusSource::generic_jsonl);
  EXPECT_EQ(c.messages()[0].id, "a");
  EXPECT_EQ(c.messages()[1].sender, "p2");
}

TEST(GenericJsonl, ErrorsCiteLineNumbers) {
  try {
    jsonl("{\"id\": \"a\", \"sender\": \"p\", \"timestamp\": 5, \"stream\": \"s\", \"topic\": \"t\", \"content\": \"x\"}\n"
          "{broken\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    jsonl("{\"id\": \"a\", \"sender\": \"p\", \"timestamp\": 5, \"stream\": \"s\", \"topic\": \"t\"}\n");
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(CorpusStore, StableSortPreservesEqualTimestampOrder) {
  std::vector<Message> msgs;
  for (int i = 0; i < 6; ++i)
    msgs.push_back({std::to_string(i), "p", 100, "s", "t", "x", false});
  Corpus c(std::move(msgs), CorpusSource::generic_jsonl);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(c.messages()[static_cast<std::size_t>(i)].id, std::to_string(i));
}

TEST(CorpusStore, EmptyCorpusSpanIsZero) {
  Corpus c;
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(c.span(), (std::pair<std::int64_t, std::int64_t>{0, 0}));
}

TEST(CorpusSourceNames, RoundTrip) {
  EXPECT_EQ(to_string(CorpusSource::zulip_export), "zulip-export");
  EXPECT_EQ(corpus_source_from_string("generic-jsonl"), CorpusSource::generic_jsonl);
  EXPECT_THROW(corpus_source_from_string("csv"), ValueError);
}
