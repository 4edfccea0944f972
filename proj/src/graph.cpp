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

#include "sfgraph/graph.hpp"

#include <algorithm>

namespace sfg {

Partition::Partition(std::uint64_t ranks, std::uint64_t vertices_per_rank)
    : ranks_(ranks), per_rank_(vertices_per_rank) {
  if (ranks == 0) throw ConfigError("partition needs at least one rank");
  if (vertices_per_rank == 0) throw ConfigError("partition needs at least one vertex per rank");
}

RankId Partition::owner_of(VertexId v) const {
  if (v >= vertex_count()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " outside [0, " +
                            std::to_string(vertex_count()) + ")");
  }
  return static_cast<RankId>(v / per_rank_);
}

std::uint64_t Partition::local_index(VertexId v) const {
  owner_of(v);
  return v % per_rank_;
}

void EdgeList::validate() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw std::out_of_range("edge " + std::to_string(i) + " (" + std::to_string(e.u) + ", " +
                              std::to_string(e.v) + ") exceeds vertex count " +
                              std::to_string(vertex_count));
    }
  }
}

void dedupe(EdgeList& g) {
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
}

EdgeList concatenate(std::vector<std::vector<Edge>> segments, std::uint64_t vertex_count,
                     bool directed) {
  EdgeList out;
  out.vertex_count = vertex_count;
  out.directed = directed;
  std::size_t total = 0;
  for (const auto& s : segments) total += s.size();
  out.edges.reserve(total);
  for (auto& s : segments) {
    out.edges.insert(out.edges.end(), s.begin(), s.end());
    std::vector<Edge>().swap(s);
  }
  return out;
}

}  // namespace sfg
