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
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "sfgraph/graph.hpp"
#include "sfgraph/rng.hpp"

namespace sfg {

/// Sets of ranks ("factions") plus, for every rank, the ordered list of
/// factions it belongs to. Membership is independent of faction contents:
/// a rank may belong to a faction that does not list it.
struct FactionConfig {
  std::size_t ranks = 0;
  std::vector<std::vector<RankId>> factions;
  std::vector<std::vector<std::size_t>> membership;

  /// Membership derived from containment: rank r belongs to every faction
  /// that lists it, in faction order.
  static FactionConfig from_factions(std::vector<std::vector<RankId>> factions,
                                     std::size_t ranks);
  /// One faction holding every rank.
  static FactionConfig all_ranks(std::size_t ranks);
  /// Consecutive blocks of `block` ranks; the last block may be short.
  static FactionConfig blocks(std::size_t ranks, std::size_t block);

  /// Throws ConfigError on empty factions, out-of-range ranks or faction
  /// indices, or a rank with no membership.
  void validate() const;

  /// Ranks of p's factions concatenated in membership order (length s(p)).
  std::vector<RankId> prefix(RankId p) const;
  std::size_t prefix_length(RankId p) const;
  /// Ranks outside the union of p's factions.
  std::vector<RankId> outsiders(RankId p) const;
};

/// Faction file: one faction per line as space-separated rank ids, plus
/// optional "member <rank>: <faction index>..." lines that set a rank's
/// membership explicitly. '#' comments and blank lines are ignored.
FactionConfig parse_faction_file(std::istream& in, std::size_t ranks);
FactionConfig read_faction_file(const std::filesystem::path& path, std::size_t ranks);
/// "all" or "blocks:<m>".
FactionConfig parse_faction_shorthand(const std::string& spec, std::size_t ranks);

struct PbaParams {
  std::uint64_t vertices_per_rank = 1;  // n
  std::uint64_t edges_per_vertex = 1;   // k
  double inter_faction_prob = 0.0;      // q
  std::uint64_t master_seed = kDefaultMasterSeed;

  std::uint64_t slots() const { return vertices_per_rank * edges_per_vertex; }
  void validate(const FactionConfig& fc) const;
};

/// One entry of a rank's association list. Before substitution `target` is a
/// rank id; after, it is a global vertex id.
struct AssocEntry {
  std::uint64_t local_vertex = 0;
  std::uint64_t target = 0;

  friend bool operator==(const AssocEntry&, const AssocEntry&) = default;
};

struct AssocList {
  std::vector<AssocEntry> entries;
};

/// Entry j targets the j-th rank of p's faction prefix and belongs to local
/// vertex j / k. Throws ConfigError if the prefix does not fit in n * k.
AssocList init_faction_prefix(RankId p, const FactionConfig& fc, const PbaParams& params);

struct Phase1Result {
  AssocList assoc;
  std::vector<std::uint64_t> counts;  // occurrences per target rank
  bool inter_faction_disabled = false;
};

/// Fills entries s..n*k-1. Each entry first draws Bernoulli(q); on success it
/// takes a uniform outsider rank, otherwise it copies the target of a uniform
/// earlier entry. If q > 0 but p has no outsiders the Bernoulli draw is
/// skipped entirely and `inter_faction_disabled` is set.
Phase1Result phase1_associate(RankId p, const PbaParams& params, const FactionConfig& fc,
                              AssocList prefix, SplitMix64& rng);

/// Chooses sum(requests) local vertices of rank p by preferential attachment
/// and splits them, in ascending requester order, into one list per requester.
///
/// Local vertices join the pool in creation order with k copies each (their
/// own out-edges); the draws are interleaved with creation so that after
/// vertex i joins, floor((i + 1) * m / n) draws have been made in total.
/// Every draw adds one more copy of the drawn vertex. Returned ids are global.
std::vector<std::vector<VertexId>> phase2_serve(RankId p, std::span<const std::uint64_t> requests,
                                                const PbaParams& params, SplitMix64& rng);

/// The i-th entry targeting rank q becomes replies[q][i]. Throws
/// ProtocolError naming q when the reply length differs from the occurrence
/// count.
std::vector<Edge> phase2_substitute(RankId p, const Partition& partition, const AssocList& assoc,
                                    std::span<const std::vector<VertexId>> replies);

/// Per-rank record of an instrumented run. Matrices are indexed [p][q].
struct PbaTrace {
  std::vector<std::vector<RankId>> prefix_targets;
  std::vector<std::vector<std::uint64_t>> announced;  // p announced to q
  std::vector<std::vector<std::uint64_t>> served;     // q's list length sent to p
  std::vector<std::vector<std::uint64_t>> substituted;  // q's endpoints placed by p
  std::vector<std::uint64_t> edges_per_rank;
};

struct PbaOptions {
  std::size_t workers = 1;
  PbaTrace* trace = nullptr;
  std::ostream* volume_log = nullptr;
  std::ostream* warnings = &std::clog;
};

/// Full two-phase protocol over `fc.ranks` ranks. Returns R * n * k edges in
/// rank order; edge (u, v) has u owned by the emitting rank.
EdgeList generate_pba(const PbaParams& params, const FactionConfig& fc,
                      const PbaOptions& options = {});

}  // namespace sfg
