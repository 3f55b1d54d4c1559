// Copyright 2026 The finecite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "finecite/citext.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_set>

#include "finecite/error.hpp"
#include "json.hpp"

namespace finecite::citext {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool IsUpper(char c) { return std::isupper(static_cast<unsigned char>(c)); }

// Length of a "[digits]" mark starting at pos, or 0.
std::size_t MarkLength(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '[') return 0;
  std::size_t i = pos + 1;
  while (i < text.size() && IsDigit(text[i])) ++i;
  if (i == pos + 1 || i >= text.size() || text[i] != ']') return 0;
  return i + 1 - pos;
}

const std::unordered_set<std::string_view>& Abbreviations() {
  static const std::unordered_set<std::string_view> kAbbrev = {
      "Dr",   "Mr",   "Mrs",  "Ms",   "Prof", "Sr",   "Jr",   "St",
      "Mt",   "Ft",   "Gen",  "Col",  "Lt",   "Sgt",  "Capt", "Rev",
      "Hon",  "Gov",  "Sen",  "Rep",  "Pres", "vs",   "etc",  "e.g",
      "i.e",  "Inc",  "Ltd",  "Co",   "Corp", "No",   "Jan",  "Feb",
      "Mar",  "Apr",  "Jun",  "Jul",  "Aug",  "Sep",  "Sept", "Oct",
      "Nov",  "Dec",  "U.S",  "U.K",  "approx", "Fig", "al",  "cf"};
  return kAbbrev;
}

bool IsClosingChar(char c) { return c == '"' || c == ')' || c == '\''; }

// Word immediately before text[dot], stripped of leading punctuation.
std::string_view WordBefore(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !IsSpace(text[begin - 1])) --begin;
  std::string_view word = text.substr(begin, dot - begin);
  while (!word.empty() && (word.front() == '(' || word.front() == '"')) {
    word.remove_prefix(1);
  }
  return word;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

const std::array<std::string_view, 4> kLeadingPunct = {"(", "\"", "\xE2\x80\x9C",
                                                       "\xE2\x80\x98"};
const std::array<std::string_view, 8> kTrailingPunct = {
    ",", ";", ":", "!", "?", ")", "\"", "\xE2\x80\x9D"};

void PeelChunk(std::string_view chunk, bool last_chunk,
               std::vector<std::string>& out) {
  std::vector<std::string> tail;
  bool peeled = true;
  while (peeled && !chunk.empty()) {
    peeled = false;
    for (std::string_view p : kLeadingPunct) {
      if (chunk.size() > p.size() && chunk.starts_with(p)) {
        out.emplace_back(p);
        chunk.remove_prefix(p.size());
        peeled = true;
        break;
      }
    }
  }
  peeled = true;
  while (peeled && !chunk.empty()) {
    peeled = false;
    for (std::string_view p : kTrailingPunct) {
      if (chunk.size() > p.size() && chunk.ends_with(p)) {
        tail.emplace_back(p);
        chunk.remove_suffix(p.size());
        peeled = true;
        break;
      }
    }
    if (!peeled && last_chunk && chunk.size() > 1 && chunk.back() == '.') {
      tail.emplace_back(".");
      chunk.remove_suffix(1);
      peeled = true;
    }
  }
  if (!chunk.empty()) out.emplace_back(chunk);
  out.insert(out.end(), tail.rbegin(), tail.rend());
}

bool AllAsciiPunct(std::string_view word) {
  return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
           return std::ispunct(static_cast<unsigned char>(c));
         });
}

std::string CleanWord(std::string_view word, const CleaningOptions& options) {
  std::string out;
  out.reserve(word.size());
  std::size_t i = 0;
  while (i < word.size()) {
    bool removed = false;
    for (const std::string& r : options.removable) {
      if (r.empty() || word.substr(i).rfind(r, 0) != 0) continue;
      if (r == "." && i > 0 && i + 1 < word.size() && IsDigit(word[i - 1]) &&
          IsDigit(word[i + 1])) {
        continue;
      }
      i += r.size();
      removed = true;
      break;
    }
    if (!removed) out.push_back(word[i++]);
  }
  return out;
}

struct RawPiece {
  bool is_mark = false;
  int mark = 0;
  std::string text;
};

std::vector<RawPiece> SplitPieces(std::string_view text) {
  std::vector<RawPiece> pieces;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsSpace(text[i])) {
      ++i;
      continue;
    }
    if (std::size_t len = MarkLength(text, i); len > 0) {
      RawPiece piece;
      piece.is_mark = true;
      // Marks are short digit runs; very long ones saturate rather than wrap.
      std::string digits(text.substr(i + 1, len - 2));
      piece.mark = digits.size() > 9 ? 999999999 : std::stoi(digits);
      piece.text = std::string(text.substr(i, len));
      pieces.push_back(std::move(piece));
      i += len;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j]) && MarkLength(text, j) == 0) {
      ++j;
    }
    pieces.push_back({false, 0, std::string(text.substr(i, j - i))});
    i = j;
  }
  return pieces;
}

}  // namespace

std::vector<std::string> SegmentResponse(std::string_view answer) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < answer.size()) {
    char c = answer[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < answer.size() && answer[end] == c) ++end;
    // Closing quotes/parens and trailing marks stay with this sentence.
    for (;;) {
      if (end < answer.size() && IsClosingChar(answer[end])) {
        ++end;
        continue;
      }
      std::size_t probe = end;
      while (probe < answer.size() && IsSpace(answer[probe])) ++probe;
      if (std::size_t len = MarkLength(answer, probe); len > 0) {
        end = probe + len;
        continue;
      }
      break;
    }
    std::size_t next = end;
    while (next < answer.size() && IsSpace(answer[next])) ++next;
    bool boundary = false;
    if (next >= answer.size()) {
      boundary = true;
    } else if (next > end && IsUpper(answer[next])) {
      boundary = !(c == '.' && Abbreviations().contains(WordBefore(answer, i)));
    }
    if (boundary) {
      std::string sentence = Trim(answer.substr(start, end - start));
      if (!sentence.empty()) sentences.push_back(std::move(sentence));
      start = end;
    }
    i = end;
  }
  std::string rest = Trim(answer.substr(std::min(start, answer.size())));
  if (!rest.empty()) sentences.push_back(std::move(rest));
  return sentences;
}

AnnotatedSentence ParseAnnotatedSentence(std::string_view sentence,
                                         const CleaningOptions& options) {
  AnnotatedSentence out;
  out.raw = std::string(sentence);
  std::vector<RawPiece> pieces = SplitPieces(sentence);

  std::size_t last_word_piece = pieces.size();
  for (std::size_t p = pieces.size(); p > 0; --p) {
    if (!pieces[p - 1].is_mark) {
      last_word_piece = p - 1;
      break;
    }
  }

  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const RawPiece& piece = pieces[p];
    if (piece.is_mark) {
      if (!out.units.empty() && out.units.back().is_group()) {
        CitationGroup& group = out.groups.back();
        if (std::find(group.marks.begin(), group.marks.end(), piece.mark) !=
            group.marks.end()) {
          ++out.duplicate_marks_dropped;
        } else {
          group.marks.push_back(piece.mark);
        }
        out.units.back().form += piece.text;
        continue;
      }
      CitationGroup group;
      group.unit_index = out.units.size() + 1;
      group.marks.push_back(piece.mark);
      out.units.push_back({piece.text, out.groups.size()});
      out.groups.push_back(std::move(group));
      continue;
    }
    std::vector<std::string> words;
    PeelChunk(piece.text, p == last_word_piece, words);
    for (std::string& w : words) out.units.push_back({std::move(w), {}});
  }

  // Group forms are rebuilt from the deduplicated marks.
  for (Unit& unit : out.units) {
    if (!unit.is_group()) continue;
    unit.form.clear();
    for (int m : out.groups[*unit.group].marks) {
      unit.form += "[" + std::to_string(m) + "]";
    }
  }

  for (std::size_t u = 0; u < out.units.size(); ++u) {
    const Unit& unit = out.units[u];
    if (unit.is_group()) continue;
    if (options.drop_punct_after_group && u > 0 &&
        out.units[u - 1].is_group() && AllAsciiPunct(unit.form)) {
      continue;
    }
    std::string cleaned = CleanWord(unit.form, options);
    if (cleaned.empty()) continue;
    out.cleaned_words.push_back(std::move(cleaned));
    out.clean_to_unit.push_back(u + 1);
  }
  return out;
}

std::string AnnotatedSentence::CleanedText() const {
  std::string text;
  for (const std::string& w : cleaned_words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

std::string AnnotatedSentence::Render() const {
  std::string text;
  for (const Unit& unit : units) {
    if (!text.empty()) text += ' ';
    text += unit.form;
  }
  return text;
}

const Passage* Response::FindPassage(int passage_id) const {
  for (const Passage& p : passages) {
    if (p.id == passage_id) return &p;
  }
  return nullptr;
}

Response ParseResponseRecord(std::string_view json_line,
                             const CleaningOptions& options) {
  using nlohmann::json;
  json record;
  try {
    record = json::parse(json_line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) {
    throw Error(ErrorCode::kParse, "response record is not a JSON object");
  }

  Response response;
  try {
    const json& id = record.at("id");
    response.id = id.is_string() ? id.get<std::string>() : id.dump();
    response.question = record.value("question", std::string());

    std::vector<std::string> texts;
    if (record.contains("sentences") && !record["sentences"].is_null()) {
      texts = record["sentences"].get<std::vector<std::string>>();
    } else {
      texts = SegmentResponse(record.value("answer", std::string()));
    }
    for (const std::string& t : texts) {
      if (Trim(t).empty()) continue;
      response.sentences.push_back(ParseAnnotatedSentence(t, options));
    }

    std::set<int> seen;
    if (record.contains("docs")) {
      int position = 0;
      for (const json& doc : record["docs"]) {
        ++position;
        Passage passage;
        passage.id = position;
        if (doc.contains("id")) {
          const json& pid = doc["id"];
          passage.id = pid.is_string() ? std::stoi(pid.get<std::string>())
                                       : pid.get<int>();
        }
        passage.title = doc.value("title", std::string());
        passage.text = doc.value("text", std::string());
        if (!seen.insert(passage.id).second) {
          throw Error(ErrorCode::kParse,
                      "response " + response.id + ": duplicate passage id " +
                          std::to_string(passage.id));
        }
        response.passages.push_back(std::move(passage));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad response record: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kParse, "non-numeric passage id in response " + response.id);
  }
  return response;
}

}  // namespace finecite::citext
