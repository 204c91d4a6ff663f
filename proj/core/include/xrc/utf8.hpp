// Copyright 2026 The xrc Authors.
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

#ifndef XRC_UTF8_HPP_
#define XRC_UTF8_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Code-point level helpers over UTF-8 strings. All character offsets in the
// toolkit count Unicode code points, the same unit SQuAD's answer_start uses.
namespace xrc::utf8 {

// Byte offset of every code point, followed by s.size(). Ill-formed
// sequences count as one code point per offending byte.
std::vector<std::size_t> codepoint_byte_offsets(std::string_view s);

std::size_t length(std::string_view s);

std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);

// Substring by code-point range [begin, end). Throws std::out_of_range.
std::string substr(std::string_view s, std::size_t begin, std::size_t end);

// 64-bit FNV-1a. Used wherever a platform-stable content hash is needed.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace xrc::utf8

#endif  // XRC_UTF8_HPP_
