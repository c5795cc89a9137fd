// Label records produced by raters (or by scoring) and their CSV codec.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chatmood/label_class.hpp"

namespace chatmood {

struct LabelRecord {
  std::string sentence_id;
  LabelClass klass = LabelClass::neutral;
  std::string rater;
  int round = 1;
  std::int64_t labeled_at = 0;  // unix seconds; 0 under deterministic runs

  bool operator==(const LabelRecord&) const = default;
};

/// Enforces the record invariants: round >= 1, (sentence_id, rater, round)
/// unique, and every round r > 1 preceded by round r - 1 for the same
/// sentence and rater.
void validate_labels(const std::vector<LabelRecord>& records);

/// Header "sentence_id,class,rater,round,labeled_at". Fields may not
/// contain commas or line breaks. Validates before rendering.
std::string labels_to_csv(const std::vector<LabelRecord>& records);

/// Inverse of labels_to_csv; problems are reported with 1-based line
/// numbers. An empty file (header only) is a valid empty label set.
std::vector<LabelRecord> labels_from_csv(const std::string& text);

void save_labels(const std::vector<LabelRecord>& records, const std::string& path);
std::vector<LabelRecord> load_labels(const std::string& path);

/// Flattens records to one class per sentence: the highest round wins, and
/// within that round the lexicographically smallest rater.
std::map<std::string, LabelClass> effective_labels(const std::vector<LabelRecord>& records);

}  // namespace chatmood
