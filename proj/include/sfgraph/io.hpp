// Copyright 2026 The sfgraph Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "sfgraph/graph.hpp"

namespace sfg {

enum class EdgeFormat { kText, kBinary };

/// Binary layout: "GGEL", u32 version, u64 vertex count, then u64 (u, v)
/// pairs. Everything little-endian.
inline constexpr char kBinaryMagic[4] = {'G', 'G', 'E', 'L'};
inline constexpr std::uint32_t kBinaryVersion = 1;
inline constexpr std::size_t kBinaryHeaderBytes = 16;

class ParseError : public std::runtime_error {
 public:
  /// `offset` is a 1-based line number for text input and a byte offset for
  /// binary input.
  ParseError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

EdgeFormat parse_edge_format(const std::string& name);

/// Returns the number of bytes written. With `dedupe_edges` the edges are
/// sorted and made unique before writing.
std::uint64_t write_edge_list(const EdgeList& g, EdgeFormat format, std::ostream& out,
                              bool dedupe_edges = false);
std::uint64_t write_edge_list(const EdgeList& g, EdgeFormat format,
                              const std::filesystem::path& path, bool dedupe_edges = false);

/// Text input: "u v" per line, blank lines and '#' comments skipped. The
/// vertex count is 1 + the largest endpoint.
EdgeList read_edge_list(std::istream& in, EdgeFormat format);

/// Without an explicit format the file is sniffed for the binary magic.
EdgeList read_edge_list(const std::filesystem::path& path,
                        std::optional<EdgeFormat> format = std::nullopt);

}  // namespace sfg
