#include "chatmood/lexicons.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace chatmood {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool has_upper(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isupper(c) != 0; });
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number \"" + text + "\"");
  }
  if (used != text.size()) throw ParseError(where + ": bad number \"" + text + "\"");
  return value;
}

// Reads a resource file line by line, skipping blanks and '#' comments.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(line, line_no);
  }
}

}  // namespace

void PolarityLexicon::insert(PolarityEntry entry) {
  entry.word = to_lower(entry.word);
  auto it = entries_.find(entry.word);
  if (it != entries_.end() && !it->second.class_only && entry.class_only)
    return;  // a scored entry is never displaced by a class-only one
  entries_[entry.word] = std::move(entry);
}

std::optional<PolarityEntry> PolarityLexicon::lookup(const std::string& word) const {
  auto it = entries_.find(to_lower(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

PolarityLexicon PolarityLexicon::parse(std::istream& in) {
  PolarityLexicon lex;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    const std::string where = "polarity line " + std::to_string(line_no);
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(where + ": expected word<TAB>class[<TAB>score]");
    PolarityEntry entry;
    entry.word = fields[0];
    if (entry.word.empty()) throw ParseError(where + ": empty word");
    try {
      entry.klass = label_class_from_string(fields[1]);
    } catch (const ValueError&) {
      throw ParseError(where + ": unknown class \"" + fields[1] + "\"");
    }
    if (fields.size() == 3) {
      entry.score = parse_double(fields[2], where);
      if (entry.score < -1.0 || entry.score > 1.0)
        throw ValueError(where + ": score " + fields[2] + " outside [-1, 1]");
      const bool consistent = (entry.klass == LabelClass::positive && entry.score >= 0.0) ||
                              (entry.klass == LabelClass::negative && entry.score <= 0.0) ||
                              (entry.klass == LabelClass::neutral && entry.score == 0.0);
      if (!consistent)
        throw ValueError(where + ": score sign inconsistent with class " +
                         std::string(to_string(entry.klass)));
    } else {
      entry.class_only = true;
      switch (entry.klass) {
        case LabelClass::positive: entry.score = 1.0; break;
        case LabelClass::neutral: entry.score = 0.0; break;
        case LabelClass::negative: entry.score = -1.0; break;
      }
    }
    lex.insert(std::move(entry));
  });
  return lex;
}

PolarityLexicon PolarityLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open polarity lexicon \"" + path + "\"");
  return parse(in);
}

void EmoticonTable::insert(EmoticonEntry entry) {
  const double sum = entry.p_pos + entry.p_neu + entry.p_neg;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValueError("emoticon \"" + entry.glyph + "\": probabilities sum to " +
                     std::to_string(sum) + ", expected 1");
  for (double p : {entry.p_pos, entry.p_neu, entry.p_neg})
    if (p < 0.0 || p > 1.0)
      throw ValueError("emoticon \"" + entry.glyph + "\": probability outside [0, 1]");
  entries_[entry.glyph] = std::move(entry);
}

std::optional<EmoticonEntry> EmoticonTable::find(const std::string& glyph) const {
  auto it = entries_.find(glyph);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<LabelClass, double>> EmoticonTable::emoticon_class(
    const std::string& glyph) const {
  auto entry = find(glyph);
  if (!entry) return std::nullopt;
  LabelClass best = LabelClass::positive;
  double best_p = entry->p_pos;
  if (entry->p_neu > best_p) {
    best = LabelClass::neutral;
    best_p = entry->p_neu;
  }
  if (entry->p_neg > best_p) {
    best = LabelClass::negative;
    best_p = entry->p_neg;
  }
  return std::pair{best, best_p};
}

std::vector<std::string> EmoticonTable::glyphs_longest_first() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [glyph, entry] : entries_) out.push_back(glyph);
  std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return a.size() > b.size();
  });
  return out;
}

EmoticonTable EmoticonTable::parse(std::istream& in) {
  EmoticonTable table;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    const std::string where = "emoticon line " + std::to_string(line_no);
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 4)
      throw ParseError(where + ": expected glyph<TAB>p_pos<TAB>p_neu<TAB>p_neg");
    EmoticonEntry entry;
    entry.glyph = fields[0];
    if (entry.glyph.empty()) throw ParseError(where + ": empty glyph");
    entry.p_pos = parse_double(fields[1], where);
    entry.p_neu = parse_double(fields[2], where);
    entry.p_neg = parse_double(fields[3], where);
    try {
      table.insert(std::move(entry));
    } catch (const ValueError& e) {
      throw ValueError(where + ": " + e.what());
    }
  });
  return table;
}

EmoticonTable EmoticonTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open emoticon table \"" + path + "\"");
  return parse(in);
}

FormalityMarkers::FormalityMarkers(std::set<std::string> formal, std::set<std::string> informal)
    : formal_(std::move(formal)), informal_(std::move(informal)) {
  for (const std::string& token : formal_)
    if (informal_.count(token))
      throw ConflictError("formality token \"" + token + "\" is both formal and informal");
}

bool FormalityMarkers::matches(const std::set<std::string>& patterns, const std::string& token) {
  if (patterns.count(token)) return true;
  const std::string lower = to_lower(token);
  // All-lowercase patterns match case-insensitively; patterns with capitals
  // (formal pronoun forms) must match exactly and were handled above.
  auto it = patterns.find(lower);
  return it != patterns.end() && !has_upper(*it);
}

FormalityMarkers FormalityMarkers::parse(std::istream& in) {
  std::set<std::string>* current = nullptr;
  std::set<std::string> formal, informal;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    const std::string where = "formality line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line == "[formal]") {
        current = &formal;
      } else if (line == "[informal]") {
        current = &informal;
      } else {
        throw ParseError(where + ": unknown section " + line);
      }
      return;
    }
    if (!current) throw ParseError(where + ": token before any section header");
    std::istringstream tokens(line);
    std::string token;
    tokens >> token;
    current->insert(token);
  });
  return FormalityMarkers(std::move(formal), std::move(informal));
}

FormalityMarkers FormalityMarkers::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open formality file \"" + path + "\"");
  return parse(in);
}

std::vector<std::string> HeuristicAdjectiveTagger::default_suffixes() {
  return {"ous", "ful", "ive", "able", "ible", "ish", "less", "ant", "ent",
          "al",  "ic",  "ig",  "lich", "isch", "sam", "bar",  "haft"};
}

bool HeuristicAdjectiveTagger::is_adjective(const std::string& lower_token) const {
  if (words_.count(lower_token)) return true;
  for (const std::string& suffix : suffixes_) {
    if (lower_token.size() >= suffix.size() + 3 &&
        lower_token.compare(lower_token.size() - suffix.size(), suffix.size(), suffix) == 0)
      return true;
  }
  return false;
}

Resources load_resources(const std::string& dir) {
  Resources resources;
  if (dir.empty()) return resources;
  const auto present = [&](const char* file) {
    return std::filesystem::exists(std::filesystem::path(dir) / file);
  };
  const auto path = [&](const char* file) { return dir + "/" + file; };
  if (present("polarity.tsv")) resources.polarity = PolarityLexicon::load(path("polarity.tsv"));
  if (present("emoticons.tsv")) resources.emoticons = EmoticonTable::load(path("emoticons.tsv"));
  if (present("formality.ini")) resources.formality = FormalityMarkers::load(path("formality.ini"));
  if (present("dictionary.txt")) resources.dictionary = Dictionary::load(path("dictionary.txt"));
  return resources;
}

}  // namespace chatmood
