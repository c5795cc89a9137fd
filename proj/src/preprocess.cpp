#include "chatmood/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <istream>
#include <regex>
#include <set>
#include <sstream>

namespace chatmood {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // swallows leading whitespace
  for (char c : s) {
    if (is_space(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

// Uppercase ASCII letter, or a Latin-1 supplement uppercase letter (two-byte
// UTF-8, covers umlauts and accented capitals).
bool is_sentence_upper(const std::string& s, std::size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && i + 1 < s.size()) {
    unsigned char d = static_cast<unsigned char>(s[i + 1]);
    return d >= 0x80 && d <= 0x9E && d != 0x97;
  }
  return false;
}

std::string replace_matches(const std::string& text, const std::regex& re,
                            const std::function<std::string(const std::smatch&)>& fn) {
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  auto end = std::sregex_iterator();
  std::size_t last = 0;
  for (auto it = begin; it != end; ++it) {
    const std::smatch& m = *it;
    out.append(text, last, static_cast<std::size_t>(m.position()) - last);
    out.append(fn(m));
    last = static_cast<std::size_t>(m.position() + m.length());
  }
  out.append(text, last, std::string::npos);
  return out;
}

std::string strip_emphasis(std::string text) {
  static const std::regex bold(R"(\*\*([^\s*](?:[^*]*[^\s*])?)\*\*)");
  static const std::regex bold_u(R"(__([^\s_](?:[^_]*[^\s_])?)__)");
  static const std::regex italic(R"(\*([^\s*](?:[^*]*[^\s*])?)\*)");
  static const std::regex italic_u(R"((^|[^A-Za-z0-9_])_([^\s_](?:[^_]*[^\s_])?)_(?=$|[^A-Za-z0-9_]))");
  for (int pass = 0; pass < 10; ++pass) {
    std::string next = std::regex_replace(text, bold, "$1");
    next = std::regex_replace(next, bold_u, "$1");
    next = std::regex_replace(next, italic, "$1");
    next = std::regex_replace(next, italic_u, "$1$2");
    if (next == text) break;
    text = std::move(next);
  }
  return text;
}

}  // namespace

std::string clean(const std::string& content) {
  static const std::regex fenced_code(R"(```[\s\S]*?(?:```|$))");
  static const std::regex inline_code("`[^`]*`");
  static const std::regex markdown_link(R"(!?\[[^\]]*\]\([^)]*\))");
  static const std::regex bare_link(R"(https?://[^\s]+|\bwww\.[^\s]+)");

  std::string text = std::regex_replace(content, fenced_code, " ");
  text = std::regex_replace(text, inline_code, " ");
  text = std::regex_replace(text, markdown_link, " ");
  text = std::regex_replace(text, bare_link, " ");
  text = strip_emphasis(text);
  return collapse_whitespace(text);
}

SplitOptions default_split_options() {
  return {{"e.g.", "i.e.", "etc.", "z.B.", "d.h.", "u.a.", "ca.", "vs.", "p.m.", "a.m.", "Mr.",
           "Mrs.", "Dr."},
          {":-)", ":-(", ":-D", ":-P", ":-/", ";-)", ":)", ":(", ":D", ":P", ":/", ":|", ";)",
           ":o", ":O", "<3", "xD", "XD"}};
}

std::vector<std::string> load_abbreviations(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = collapse_whitespace(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    out.push_back(trimmed);
  }
  return out;
}

std::vector<std::string> load_abbreviations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation file \"" + path + "\"");
  return load_abbreviations(in);
}

namespace {

// Case-insensitive occurrence scan with a word boundary before the match.
void mark_abbreviations(const std::string& text, const std::vector<std::string>& abbreviations,
                        std::vector<char>& no_break) {
  const std::string lower = to_lower(text);
  for (const std::string& abbr : abbreviations) {
    const std::string needle = to_lower(abbr);
    if (needle.empty()) continue;
    std::size_t pos = 0;
    while ((pos = lower.find(needle, pos)) != std::string::npos) {
      if (pos == 0 || !is_alnum(lower[pos - 1])) {
        std::fill(no_break.begin() + static_cast<long>(pos),
                  no_break.begin() + static_cast<long>(pos + needle.size()), 1);
      }
      pos += 1;
    }
  }
}

void mark_emoticons(const std::string& text, const std::vector<std::string>& emoticons,
                    std::vector<char>& no_break) {
  std::vector<std::string> glyphs = emoticons;
  std::sort(glyphs.begin(), glyphs.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  for (std::size_t i = 0; i < text.size();) {
    bool matched = false;
    for (const std::string& g : glyphs) {
      if (!g.empty() && text.compare(i, g.size(), g) == 0) {
        std::fill(no_break.begin() + static_cast<long>(i),
                  no_break.begin() + static_cast<long>(i + g.size()), 1);
        i += g.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
}

Sentence make_sentence(const std::string& message_id, int index, const std::string& segment) {
  Sentence s;
  s.message_id = message_id;
  s.index = index;
  s.raw = segment;
  s.clean = collapse_whitespace(segment);
  std::istringstream tokens(s.clean);
  std::string tok;
  while (tokens >> tok) s.tokens.push_back(tok);
  return s;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<Sentence> split_sentences(const std::string& cleaned, const std::string& message_id,
                                      const SplitOptions& options) {
  std::vector<Sentence> out;
  if (collapse_whitespace(cleaned).empty()) return out;

  std::vector<char> no_break(cleaned.size(), 0);
  mark_abbreviations(cleaned, options.abbreviations, no_break);
  mark_emoticons(cleaned, options.emoticons, no_break);

  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(cleaned[begin])) ++begin;
    while (end > begin && is_space(cleaned[end - 1])) --end;
    if (begin >= end) return;
    Sentence s = make_sentence(message_id, static_cast<int>(out.size()),
                               cleaned.substr(begin, end - begin));
    if (!s.clean.empty()) out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = cleaned.size();
  while (i < n) {
    if (!is_terminator(cleaned[i]) || no_break[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(cleaned[j]) && !no_break[j]) ++j;
    std::size_t k = j;
    while (k < n && is_space(cleaned[k])) ++k;
    const bool at_end = k >= n;
    const bool upper_after_gap = k > j && k < n && is_sentence_upper(cleaned, k);
    if (at_end || upper_after_gap) {
      emit(start, j);
      start = k;
      i = k;
    } else {
      i = j;
    }
  }
  emit(start, n);
  return out;
}

Dictionary Dictionary::parse(std::istream& in) {
  std::map<std::string, std::uint64_t> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("dictionary line " + std::to_string(line_no) +
                       ": expected word<TAB>frequency");
    const std::string word = to_lower(line.substr(0, tab));
    std::uint64_t freq = 0;
    try {
      freq = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError("dictionary line " + std::to_string(line_no) + ": bad frequency");
    }
    if (word.empty())
      throw ParseError("dictionary line " + std::to_string(line_no) + ": empty word");
    words[word] = freq;
  }
  return Dictionary(std::move(words));
}

Dictionary Dictionary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dictionary \"" + path + "\"");
  return parse(in);
}

std::uint64_t Dictionary::frequency(const std::string& word) const {
  auto it = words_.find(word);
  return it == words_.end() ? 0 : it->second;
}

namespace {

// Levenshtein distance, capped: returns cap + 1 as soon as it cannot stay
// within cap.
int levenshtein_capped(const std::string& a, const std::string& b, int cap) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (std::abs(la - lb) > cap) return cap + 1;
  std::vector<int> prev(static_cast<std::size_t>(lb) + 1), cur(static_cast<std::size_t>(lb) + 1);
  for (int j = 0; j <= lb; ++j) prev[static_cast<std::size_t>(j)] = j;
  for (int i = 1; i <= la; ++i) {
    cur[0] = i;
    int row_min = cur[0];
    for (int j = 1; j <= lb; ++j) {
      const int sub = prev[static_cast<std::size_t>(j - 1)] + (a[static_cast<std::size_t>(i - 1)] == b[static_cast<std::size_t>(j - 1)] ? 0 : 1);
      const int del = prev[static_cast<std::size_t>(j)] + 1;
      const int ins = cur[static_cast<std::size_t>(j - 1)] + 1;
      cur[static_cast<std::size_t>(j)] = std::min({sub, del, ins});
      row_min = std::min(row_min, cur[static_cast<std::size_t>(j)]);
    }
    if (row_min > cap) return cap + 1;
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(lb)] <= cap ? prev[static_cast<std::size_t>(lb)] : cap + 1;
}

}  // namespace

SpellResult correct_spelling(const std::string& token, const Dictionary& dictionary) {
  if (dictionary.contains(token)) return {token, false};
  int best_distance = 3;
  std::uint64_t best_freq = 0;
  const std::string* best_word = nullptr;
  for (const auto& [word, freq] : dictionary.words()) {
    const int d = levenshtein_capped(token, word, 2);
    if (d > 2) continue;
    if (d < best_distance || (d == best_distance && freq > best_freq)) {
      best_distance = d;
      best_freq = freq;
      best_word = &word;
    }
    // std::map iterates words in lexicographic order, so the first word seen
    // at a given (distance, frequency) already wins ties.
  }
  if (best_word) return {*best_word, true};
  return {token, true};
}

PseudonymMap::PseudonymMap(std::map<std::string, std::string> persons,
                           std::map<std::string, std::string> emails,
                           std::map<std::string, std::string> links)
    : persons_(std::move(persons)), emails_(std::move(emails)), links_(std::move(links)) {
  for (const auto* kind : {&persons_, &emails_, &links_}) {
    std::set<std::string> seen;
    for (const auto& [surface, placeholder] : *kind) {
      if (!seen.insert(placeholder).second)
        throw ValueError("pseudonym placeholder \"" + placeholder + "\" assigned twice");
    }
  }
}

std::string PseudonymMap::person_placeholder(const std::string& name) {
  auto [it, inserted] =
      persons_.try_emplace(name, "[[person_" + std::to_string(persons_.size() + 1) + "]]");
  (void)inserted;
  return it->second;
}

std::string PseudonymMap::email_placeholder(const std::string& address) {
  const std::string key = to_lower(address);
  auto [it, inserted] =
      emails_.try_emplace(key, "[[email_" + std::to_string(emails_.size() + 1) + "]]");
  (void)inserted;
  return it->second;
}

std::string PseudonymMap::link_placeholder(const std::string& url) {
  auto [it, inserted] =
      links_.try_emplace(url, "[[link_" + std::to_string(links_.size() + 1) + "]]");
  (void)inserted;
  return it->second;
}

namespace {

// Spans of already-inserted placeholders; name scanning must not look inside.
std::vector<std::pair<std::size_t, std::size_t>> placeholder_spans(const std::string& text) {
  static const std::regex placeholder(R"(\[\[(?:person|email|link)_\d+\]\])");
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), placeholder);
       it != std::sregex_iterator(); ++it) {
    spans.emplace_back(static_cast<std::size_t>(it->position()),
                       static_cast<std::size_t>(it->position() + it->length()));
  }
  return spans;
}

bool inside_any(const std::vector<std::pair<std::size_t, std::size_t>>& spans, std::size_t begin,
                std::size_t end) {
  for (const auto& [s, e] : spans)
    if (begin < e && end > s) return true;
  return false;
}

std::size_t find_icase(const std::string& haystack, const std::string& needle, std::size_t from) {
  if (needle.empty()) return std::string::npos;
  const std::string h = to_lower(haystack);
  const std::string n = to_lower(needle);
  return h.find(n, from);
}

// Replaces roster-name occurrences (optionally @-prefixed) at word boundaries.
std::string replace_names(std::string text, const std::vector<std::string>& names,
                          PseudonymMap& map) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  for (const std::string& name : sorted) {
    if (name.empty()) continue;
    std::size_t from = 0;
    while (true) {
      auto spans = placeholder_spans(text);
      std::size_t pos = find_icase(text, name, from);
      if (pos == std::string::npos) break;
      std::size_t begin = pos;
      const std::size_t end = pos + name.size();
      const bool at_mention = begin > 0 && text[begin - 1] == '@';
      if (at_mention) --begin;
      const bool left_ok = begin == 0 || (!is_alnum(text[begin - 1]) && text[begin - 1] != '[');
      const bool right_ok = end >= text.size() || (!is_alnum(text[end]) && text[end] != ']');
      if (!left_ok || !right_ok || inside_any(spans, begin, end)) {
        from = pos + 1;
        continue;
      }
      const std::string placeholder = map.person_placeholder(name);
      text.replace(begin, end - begin, placeholder);
      from = begin + placeholder.size();
    }
  }
  return text;
}

}  // namespace

std::string anonymize(const std::string& text, const std::vector<std::string>& known_names,
                      PseudonymMap& map) {
  static const std::regex email(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
  static const std::regex url(R"(https?://[^\s]+|\bwww\.[^\s]+)");
  static const std::regex mention(R"(@\*\*([^*]+)\*\*)");

  // URLs first so an address embedded in a link is not carved out of it.
  std::string out =
      replace_matches(text, url, [&](const std::smatch& m) { return map.link_placeholder(m.str()); });
  out = replace_matches(out, email,
                        [&](const std::smatch& m) { return map.email_placeholder(m.str()); });
  out = replace_matches(out, mention,
                        [&](const std::smatch& m) { return map.person_placeholder(m[1].str()); });
  out = replace_names(std::move(out), known_names, map);
  return out;
}

std::size_t SentenceStore::sentence_count() const {
  std::size_t n = 0;
  for (const PreparedMessage& m : messages) n += m.sentences.size();
  return n;
}

std::size_t SentenceStore::removed_count() const {
  std::size_t n = 0;
  for (const PreparedMessage& m : messages) n += m.removed_by_cleaning ? 1 : 0;
  return n;
}

const Sentence* SentenceStore::find_sentence(const std::string& sentence_id) const {
  for (const PreparedMessage& m : messages)
    for (const Sentence& s : m.sentences)
      if (s.id() == sentence_id) return &s;
  return nullptr;
}

const PreparedMessage* SentenceStore::find_message(const std::string& message_id) const {
  for (const PreparedMessage& m : messages)
    if (m.id == message_id) return &m;
  return nullptr;
}

SentenceStore prepare_corpus(const Corpus& corpus, const PreprocessOptions& options,
                             PseudonymMap& pseudonyms) {
  SentenceStore store;
  store.messages.reserve(corpus.size());
  for (const Message& msg : corpus.messages()) {
    PreparedMessage pm;
    pm.id = msg.id;
    pm.sender = msg.sender;
    pm.timestamp = msg.timestamp;
    pm.stream = msg.stream;
    pm.topic = msg.topic;
    std::string text = clean(msg.content);
    text = anonymize(text, options.roster, pseudonyms);
    pm.clean_text = text;
    pm.removed_by_cleaning = text.empty();
    if (!pm.removed_by_cleaning) pm.sentences = split_sentences(text, pm.id, options.split);
    store.messages.push_back(std::move(pm));
  }
  return store;
}

}  // namespace chatmood
