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

#ifndef LINKRISK_SRC_MARKDOWN_INTERNAL_H_
#define LINKRISK_SRC_MARKDOWN_INTERNAL_H_

#include <string>
#include <string_view>
#include <unordered_set>

namespace linkrisk {

// As StripMarkdown, but whitespace-delimited tokens found in `verbatim`
// (smilies such as ":-*") are copied through untouched.
std::string StripMarkdownImpl(std::string_view text,
                              const std::unordered_set<std::string>* verbatim);

}  // namespace linkrisk

#endif  // LINKRISK_SRC_MARKDOWN_INTERNAL_H_
