// Copyright 2026 The linkrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "linkrisk/corpus.h"
#include "markdown_internal.h"

namespace linkrisk {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences, i.e. non-ASCII text.
bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z');
}

bool IsAsciiPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && u > ' ' && !IsWordByte(c) && u != 0x7f;
}

std::string_view LeftTrim(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && IsSpace(s[i])) ++i;
  return s.substr(i);
}

bool IsHorizontalRule(std::string_view trimmed) {
  char marker = 0;
  int count = 0;
  for (char c : trimmed) {
    if (IsSpace(c)) continue;
    if (c != '*' && c != '-' && c != '_') return false;
    if (marker == 0) marker = c;
    if (c != marker) return false;
    ++count;
  }
  return count >= 3;
}

bool IsTableSeparator(std::string_view trimmed) {
  bool has_dash = false;
  bool has_pipe = false;
  for (char c : trimmed) {
    if (c == '-') {
      has_dash = true;
    } else if (c == '|') {
      has_pipe = true;
    } else if (c != ':' && !IsSpace(c)) {
      return false;
    }
  }
  return has_dash && has_pipe;
}

// Drops a leading header or list marker.
std::string_view StripBlockMarker(std::string_view trimmed) {
  std::size_t i = 0;
  if (!trimmed.empty() && trimmed[0] == '#') {
    while (i < trimmed.size() && trimmed[i] == '#') ++i;
    if (i == trimmed.size() || IsSpace(trimmed[i])) return LeftTrim(trimmed.substr(i));
    return trimmed;
  }
  if (trimmed.size() >= 2 &&
      (trimmed[0] == '*' || trimmed[0] == '-' || trimmed[0] == '+') &&
      IsSpace(trimmed[1])) {
    return LeftTrim(trimmed.substr(2));
  }
  while (i < trimmed.size() && trimmed[i] >= '0' && trimmed[i] <= '9') ++i;
  if (i > 0 && i + 1 < trimmed.size() &&
      (trimmed[i] == '.' || trimmed[i] == ')') && IsSpace(trimmed[i + 1])) {
    return LeftTrim(trimmed.substr(i + 2));
  }
  return trimmed;
}

std::size_t RunLength(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && s[j] == s[i]) ++j;
  return j - i;
}

// Index of the bracket closing the one at `open`, or npos.
std::size_t MatchBracket(std::string_view s, std::size_t open, char lhs,
                         char rhs) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == lhs) ++depth;
    if (s[i] == rhs && --depth == 0) return i;
  }
  return std::string_view::npos;
}

class InlineStripper {
 public:
  explicit InlineStripper(const std::unordered_set<std::string>* verbatim)
      : verbatim_(verbatim) {}

  std::string Strip(std::string_view line) const {
    std::string out;
    out.reserve(line.size());
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      const bool token_start = i == 0 || IsSpace(line[i - 1]);
      if (token_start && verbatim_ != nullptr && !IsSpace(c)) {
        std::size_t end = i;
        while (end < line.size() && !IsSpace(line[end])) ++end;
        const std::string token(line.substr(i, end - i));
        if (verbatim_->contains(token)) {
          out += token;
          i = end;
          continue;
        }
      }
      if (c == '\\' && i + 1 < line.size() && IsAsciiPunct(line[i + 1])) {
        out += line[i + 1];
        i += 2;
        continue;
      }
      if (c == '`') {
        const std::size_t run = RunLength(line, i);
        const std::size_t close = FindClosingTicks(line, i + run, run);
        if (close != std::string_view::npos) {
          out += ' ';
          i = close + run;
        } else {
          out.append(run, '`');
          i += run;
        }
        continue;
      }
      if (c == '[') {
        const std::size_t close = MatchBracket(line, i, '[', ']');
        if (close != std::string_view::npos && close + 1 < line.size() &&
            line[close + 1] == '(') {
          const std::size_t paren = MatchBracket(line, close + 1, '(', ')');
          if (paren != std::string_view::npos) {
            out += ' ';
            out += Strip(line.substr(i + 1, close - i - 1));
            out += ' ';
            out += line.substr(close + 2, paren - close - 2);
            out += ' ';
            i = paren + 1;
            continue;
          }
        }
        out += c;
        ++i;
        continue;
      }
      if (c == '*' || c == '_' || (c == '~' && RunLength(line, i) >= 2)) {
        const std::size_t run = RunLength(line, i);
        const bool prev_word = i > 0 && !IsSpace(line[i - 1]);
        const bool next_word = i + run < line.size() && !IsSpace(line[i + run]);
        bool marker = prev_word || next_word;
        if (c == '_') {
          // Intra-word underscores (snake_case) are text.
          const bool prev_alnum = i > 0 && IsWordByte(line[i - 1]);
          const bool next_alnum =
              i + run < line.size() && IsWordByte(line[i + run]);
          marker = marker && !(prev_alnum && next_alnum);
        }
        if (!marker) out.append(run, c);
        i += run;
        continue;
      }
      if (c == '^' && i + 1 < line.size() && !IsSpace(line[i + 1])) {
        ++i;
        continue;
      }
      if ((c == '>' && i + 1 < line.size() && line[i + 1] == '!') ||
          (c == '!' && i + 1 < line.size() && line[i + 1] == '<')) {
        out += ' ';
        i += 2;
        continue;
      }
      if (c == '|') {
        out += ' ';
        ++i;
        continue;
      }
      out += c;
      ++i;
    }
    return out;
  }

 private:
  static std::size_t FindClosingTicks(std::string_view s, std::size_t from,
                                      std::size_t run) {
    std::size_t i = from;
    while (i < s.size()) {
      if (s[i] == '`') {
        const std::size_t r = RunLength(s, i);
        if (r == run) return i;
        i += r;
      } else {
        ++i;
      }
    }
    return std::string_view::npos;
  }

  const std::unordered_set<std::string>* verbatim_;
};

}  // namespace

std::string StripMarkdownImpl(std::string_view text,
                              const std::unordered_set<std::string>* verbatim) {
  const InlineStripper inline_stripper(verbatim);
  std::string out;
  out.reserve(text.size());
  bool in_fence = false;
  std::string fence;
  bool prev_blank = true;
  bool in_indented_code = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view trimmed = LeftTrim(line);

    if (in_fence) {
      if (trimmed.substr(0, fence.size()) == fence) in_fence = false;
      continue;
    }
    if (trimmed.starts_with("```") || trimmed.starts_with("~~~")) {
      in_fence = true;
      fence = std::string(trimmed.substr(0, 3));
      continue;
    }
    const bool indented = line.starts_with("    ") || line.starts_with("\t");
    if (indented && !trimmed.empty() && (prev_blank || in_indented_code)) {
      in_indented_code = true;
      prev_blank = false;
      continue;
    }
    if (!trimmed.empty()) in_indented_code = false;
    prev_blank = trimmed.empty();

    if (trimmed.starts_with(">") && !trimmed.starts_with(">!")) continue;
    if (IsHorizontalRule(trimmed) || IsTableSeparator(trimmed)) {
      out += '\n';
      continue;
    }
    out += inline_stripper.Strip(StripBlockMarker(trimmed));
    out += '\n';
  }
  return out;
}

std::string StripMarkdown(std::string_view text) {
  return StripMarkdownImpl(text, nullptr);
}

}  // namespace linkrisk
