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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace finecite::citext {

/// A maximal run of adjacent "[n]" marks occupying one unit of a sentence.
struct CitationGroup {
  std::size_t unit_index = 0;  // 1-based position among the sentence's units
  std::vector<int> marks;      // passage ids, first-occurrence order, no dups

  bool operator==(const CitationGroup&) const = default;
};

struct Unit {
  std::string form;  // surface text; groups render as "[1][2]"
  std::optional<std::size_t> group;  // ordinal into AnnotatedSentence::groups

  bool is_group() const { return group.has_value(); }
  bool operator==(const Unit&) const = default;
};

struct AnnotatedSentence {
  std::string raw;
  std::vector<Unit> units;
  std::vector<CitationGroup> groups;
  std::vector<std::string> cleaned_words;
  std::vector<std::size_t> clean_to_unit;  // cleaned position -> 1-based unit
  std::size_t duplicate_marks_dropped = 0;

  std::size_t length_units() const { return units.size(); }
  // Groups without any word to attach to; decomposition is skipped.
  bool degenerate() const { return cleaned_words.empty() && !groups.empty(); }
  std::string CleanedText() const;
  // Units joined by single spaces; re-parsing this yields the same units.
  std::string Render() const;
};

struct CleaningOptions {
  // Substrings deleted from every word. A '.' between two digits survives.
  std::vector<std::string> removable = {".", "'", "\"", "\xE2\x80\x98",
                                        "\xE2\x80\x99", "\xE2\x80\x9C",
                                        "\xE2\x80\x9D"};
  // A punctuation-only word right after a citation group belongs to the mark
  // ("25 [2], while") and is dropped from the cleaned words.
  bool drop_punct_after_group = true;
};

std::vector<std::string> SegmentResponse(std::string_view answer);

AnnotatedSentence ParseAnnotatedSentence(std::string_view sentence,
                                         const CleaningOptions& options = {});

struct Passage {
  int id = 0;
  std::string title;
  std::string text;
};

struct Response {
  std::string id;
  std::string question;
  std::vector<AnnotatedSentence> sentences;
  std::vector<Passage> passages;

  const Passage* FindPassage(int id) const;
};

// One line of the responses JSONL:
// {"id", "question", "answer", "docs": [{"id", "title", "text"}],
//  optional "sentences": [text]}.
// A doc without "id" gets its 1-based position.
Response ParseResponseRecord(std::string_view json_line,
                             const CleaningOptions& options = {});

}  // namespace finecite::citext
