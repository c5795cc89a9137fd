#include "chatmood/labels.hpp"

#include <set>
#include <sstream>
#include <tuple>

#include "chatmood/artifact_io.hpp"
#include "chatmood/errors.hpp"

namespace chatmood {

namespace {

constexpr const char* kHeader = "sentence_id,class,rater,round,labeled_at";

void check_field(const std::string& value, const char* name) {
  if (value.find_first_of(",\r\n") != std::string::npos)
    throw ValueError(std::string(name) + " may not contain commas or line breaks: \"" + value +
                     "\"");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) return fields;
    start = comma + 1;
  }
}

long parse_integer(const std::string& field, int line_no, const char* name) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(field, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + name + " \"" + field + "\"");
  }
  if (used != field.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad " + name + " \"" + field + "\"");
  return value;
}

}  // namespace

void validate_labels(const std::vector<LabelRecord>& records) {
  std::set<std::tuple<std::string, std::string, int>> seen;
  for (const LabelRecord& r : records) {
    if (r.sentence_id.empty()) throw ValueError("label record with empty sentence_id");
    if (r.rater.empty()) throw ValueError("label record with empty rater");
    if (r.round < 1)
      throw ValueError("label round must be >= 1, got " + std::to_string(r.round) + " for \"" +
                       r.sentence_id + "\"");
    if (!seen.insert({r.sentence_id, r.rater, r.round}).second)
      throw DuplicateIdError("duplicate label for sentence \"" + r.sentence_id + "\", rater \"" +
                             r.rater + "\", round " + std::to_string(r.round));
  }
  for (const LabelRecord& r : records) {
    if (r.round > 1 && !seen.count({r.sentence_id, r.rater, r.round - 1}))
      throw ConflictError("round " + std::to_string(r.round) + " label for sentence \"" +
                          r.sentence_id + "\", rater \"" + r.rater + "\" lacks a round " +
                          std::to_string(r.round - 1) + " predecessor");
  }
}

std::string labels_to_csv(const std::vector<LabelRecord>& records) {
  validate_labels(records);
  std::ostringstream out;
  out << kHeader << "\n";
  for (const LabelRecord& r : records) {
    check_field(r.sentence_id, "sentence_id");
    check_field(r.rater, "rater");
    out << r.sentence_id << ',' << to_string(r.klass) << ',' << r.rater << ',' << r.round << ','
        << r.labeled_at << "\n";
  }
  return std::move(out).str();
}

std::vector<LabelRecord> labels_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw ParseError(std::string("line 1: expected header \"") + kHeader + "\"");
  std::vector<LabelRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    LabelRecord r;
    r.sentence_id = fields[0];
    try {
      r.klass = label_class_from_string(fields[1]);
    } catch (const ValueError&) {
      throw ParseError("line " + std::to_string(line_no) + ": unknown class \"" + fields[1] +
                       "\"");
    }
    r.rater = fields[2];
    r.round = static_cast<int>(parse_integer(fields[3], line_no, "round"));
    r.labeled_at = parse_integer(fields[4], line_no, "labeled_at");
    records.push_back(std::move(r));
  }
  validate_labels(records);
  return records;
}

void save_labels(const std::vector<LabelRecord>& records, const std::string& path) {
  write_text_file(path, labels_to_csv(records));
}

std::vector<LabelRecord> load_labels(const std::string& path) {
  return labels_from_csv(read_text_file(path));
}

std::map<std::string, LabelClass> effective_labels(const std::vector<LabelRecord>& records) {
  validate_labels(records);
  std::map<std::string, const LabelRecord*> best;
  for (const LabelRecord& r : records) {
    auto [it, inserted] = best.try_emplace(r.sentence_id, &r);
    if (inserted) continue;
    const LabelRecord& b = *it->second;
    if (r.round > b.round || (r.round == b.round && r.rater < b.rater)) it->second = &r;
  }
  std::map<std::string, LabelClass> labels;
  for (const auto& [id, record] : best) labels.emplace(id, record->klass);
  return labels;
}

}  // namespace chatmood
