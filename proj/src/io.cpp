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

#include "sfgraph/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace sfg {

namespace {

void put_le(std::vector<char>& buf, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses one unsigned token starting at `pos`; advances past it.
std::optional<std::uint64_t> next_u64(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size()) return std::nullopt;
  std::uint64_t value = 0;
  const auto* begin = line.data() + pos;
  const auto* end = line.data() + line.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || (ptr != end && *ptr != ' ' && *ptr != '\t')) {
    throw std::invalid_argument("non-numeric token");
  }
  pos = static_cast<std::size_t>(ptr - line.data());
  return value;
}

EdgeList read_text(std::istream& in) {
  EdgeList g;
  std::string raw;
  std::uint64_t line_no = 0;
  VertexId max_id = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t pos = 0;
    std::optional<std::uint64_t> u, v;
    try {
      u = next_u64(line, pos);
      v = next_u64(line, pos);
      if (u && v && next_u64(line, pos)) throw std::invalid_argument("extra token");
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what() + " in '" +
                           std::string(line) + "'",
                       line_no);
    }
    if (!u || !v) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two vertex ids",
                       line_no);
    }
    g.edges.push_back({*u, *v});
    max_id = std::max({max_id, *u, *v});
  }
  g.vertex_count = g.edges.empty() ? 0 : max_id + 1;
  return g;
}

EdgeList read_binary(std::istream& in) {
  std::array<unsigned char, kBinaryHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw ParseError("truncated binary header", static_cast<std::uint64_t>(in.gcount()));
  }
  if (std::memcmp(header.data(), kBinaryMagic, 4) != 0) throw ParseError("bad magic", 0);
  const auto version = get_le(header.data() + 4, 4);
  if (version != kBinaryVersion) {
    throw ParseError("unsupported binary version " + std::to_string(version), 4);
  }
  EdgeList g;
  g.vertex_count = get_le(header.data() + 8, 8);

  std::vector<unsigned char> body((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (body.size() % 16 != 0) {
    const auto whole = body.size() / 16 * 16;
    throw ParseError("truncated binary payload: " + std::to_string(body.size()) +
                         " bytes is not a whole number of u64 pairs",
                     kBinaryHeaderBytes + whole);
  }
  g.edges.resize(body.size() / 16);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    g.edges[i] = {get_le(body.data() + 16 * i, 8), get_le(body.data() + 16 * i + 8, 8)};
    if (g.edges[i].u >= g.vertex_count || g.edges[i].v >= g.vertex_count) {
      throw ParseError("edge " + std::to_string(i) + " exceeds header vertex count",
                       kBinaryHeaderBytes + 16 * i);
    }
  }
  return g;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what), offset_(offset) {}

EdgeFormat parse_edge_format(const std::string& name) {
  if (name == "text") return EdgeFormat::kText;
  if (name == "binary") return EdgeFormat::kBinary;
  throw ConfigError("unknown edge format '" + name + "' (expected text|binary)");
}

std::uint64_t write_edge_list(const EdgeList& graph, EdgeFormat format, std::ostream& out,
                              bool dedupe_edges) {
  const EdgeList* g = &graph;
  EdgeList unique;
  if (dedupe_edges) {
    unique = graph;
    dedupe(unique);
    g = &unique;
  }

  std::vector<char> buf;
  std::uint64_t written = 0;
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    written += buf.size();
    buf.clear();
  };

  if (format == EdgeFormat::kBinary) {
    buf.insert(buf.end(), kBinaryMagic, kBinaryMagic + 4);
    put_le(buf, kBinaryVersion, 4);
    put_le(buf, g->vertex_count, 8);
    for (const auto& e : g->edges) {
      put_le(buf, e.u, 8);
      put_le(buf, e.v, 8);
      if (buf.size() >= (1u << 20)) flush();
    }
  } else {
    auto append = [&buf](std::uint64_t value, char sep) {
      std::array<char, 24> tmp{};
      const auto end = std::to_chars(tmp.data(), tmp.data() + tmp.size(), value).ptr;
      buf.insert(buf.end(), tmp.data(), end);
      buf.push_back(sep);
    };
    for (const auto& e : g->edges) {
      append(e.u, ' ');
      append(e.v, '\n');
      if (buf.size() >= (1u << 20)) flush();
    }
  }
  flush();
  if (!out) throw std::runtime_error("edge list write failed");
  return written;
}

std::uint64_t write_edge_list(const EdgeList& g, EdgeFormat format,
                              const std::filesystem::path& path, bool dedupe_edges) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  try {
    auto n = write_edge_list(g, format, out, dedupe_edges);
    out.close();
    if (!out) throw std::runtime_error("close failed");
    return n;
  } catch (const std::exception& e) {
    throw std::runtime_error("writing '" + path.string() + "': " + e.what());
  }
}

EdgeList read_edge_list(std::istream& in, EdgeFormat format) {
  return format == EdgeFormat::kBinary ? read_binary(in) : read_text(in);
}

EdgeList read_edge_list(const std::filesystem::path& path, std::optional<EdgeFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  if (!format) {
    char magic[4] = {};
    in.read(magic, 4);
    const bool binary = in.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0;
    in.clear();
    in.seekg(0);
    format = binary ? EdgeFormat::kBinary : EdgeFormat::kText;
  }
  try {
    return read_edge_list(in, *format);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

}  // namespace sfg
