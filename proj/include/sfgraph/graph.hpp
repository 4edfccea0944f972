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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfg {

using VertexId = std::uint64_t;
using RankId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Thrown for invalid user-facing configuration (bad flags, bad faction or
/// seed files, inconsistent parameters).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when ranks disagree about message contents or counts.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contiguous block assignment of `ranks * vertices_per_rank` vertices.
class Partition {
 public:
  Partition(std::uint64_t ranks, std::uint64_t vertices_per_rank);

  std::uint64_t ranks() const { return ranks_; }
  std::uint64_t vertices_per_rank() const { return per_rank_; }
  std::uint64_t vertex_count() const { return ranks_ * per_rank_; }

  /// Throws std::out_of_range for v >= vertex_count().
  RankId owner_of(VertexId v) const;
  std::uint64_t local_index(VertexId v) const;
  VertexId global_id(RankId rank, std::uint64_t local) const {
    return static_cast<VertexId>(rank) * per_rank_ + local;
  }

 private:
  std::uint64_t ranks_;
  std::uint64_t per_rank_;
};

inline RankId owner_of(VertexId v, const Partition& p) { return p.owner_of(v); }

/// Edge sequence over vertices [0, vertex_count). Duplicates and self-loops
/// are legal.
struct EdgeList {
  std::vector<Edge> edges;
  std::uint64_t vertex_count = 0;
  bool directed = false;

  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }

  /// Throws std::out_of_range naming the first endpoint >= vertex_count.
  void validate() const;
};

/// Sort and drop duplicate pairs in place.
void dedupe(EdgeList& g);

/// Concatenate per-rank segments in rank order.
EdgeList concatenate(std::vector<std::vector<Edge>> segments, std::uint64_t vertex_count,
                     bool directed);

}  // namespace sfg
