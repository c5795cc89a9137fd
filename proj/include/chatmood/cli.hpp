// Command front end: ingest, label, featurize, train, evaluate, score, report.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chatmood/labels.hpp"
#include "chatmood/preprocess.hpp"

namespace chatmood {

/// Streams and terminal state the front end talks to.
struct CliStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool stdin_is_tty = false;
};

/// Console labeling over a sentence store, line-buffered: one key per line
/// (p=positive, n=neutral, x=negative, u=undo, s=skip, q=save and quit).
/// Presents the sentences still unlabeled for (rater, round) in a seeded
/// random order; for rounds past the first, only sentences the rater
/// finished in the previous round are eligible.
class LabelSession {
 public:
  LabelSession(const SentenceStore& store, std::vector<LabelRecord> existing, std::string rater,
               int round, std::uint64_t seed, std::int64_t now);

  /// Sentence ids queued for this session, in presentation order.
  const std::vector<std::string>& queue() const { return queue_; }

  /// Drives the console protocol; returns the number of labels added.
  int run(std::istream& in, std::ostream& out);

  /// Existing records plus everything added this session.
  const std::vector<LabelRecord>& records() const { return records_; }

 private:
  const SentenceStore* store_;
  std::vector<LabelRecord> records_;
  std::size_t session_start_;  // records_ index where this session's labels begin
  std::string rater_;
  int round_;
  std::int64_t now_;
  std::vector<std::string> queue_;
};

/// Runs one command; returns the process exit status (0 = success).
int run_cli(const std::vector<std::string>& args, CliStreams streams);

}  // namespace chatmood
