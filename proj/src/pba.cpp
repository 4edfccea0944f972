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

#include "sfgraph/pba.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "sfgraph/transport.hpp"

namespace sfg {

namespace {

std::uint64_t parse_uint(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty() || token.front() == '-') {
    throw ConfigError("bad " + what + " '" + token + "'");
  }
  return v;
}

}  // namespace

FactionConfig FactionConfig::from_factions(std::vector<std::vector<RankId>> factions,
                                           std::size_t ranks) {
  FactionConfig fc;
  fc.ranks = ranks;
  fc.factions = std::move(factions);
  fc.membership.assign(ranks, {});
  for (std::size_t f = 0; f < fc.factions.size(); ++f) {
    for (auto r : fc.factions[f]) {
      if (r < ranks) {
        auto& m = fc.membership[r];
        if (m.empty() || m.back() != f) m.push_back(f);
      }
    }
  }
  return fc;
}

FactionConfig FactionConfig::all_ranks(std::size_t ranks) {
  std::vector<RankId> all(ranks);
  for (std::size_t r = 0; r < ranks; ++r) all[r] = static_cast<RankId>(r);
  return from_factions({std::move(all)}, ranks);
}

FactionConfig FactionConfig::blocks(std::size_t ranks, std::size_t block) {
  if (block == 0) throw ConfigError("faction block size must be positive");
  std::vector<std::vector<RankId>> factions;
  for (std::size_t start = 0; start < ranks; start += block) {
    auto& f = factions.emplace_back();
    for (std::size_t r = start; r < std::min(ranks, start + block); ++r) {
      f.push_back(static_cast<RankId>(r));
    }
  }
  return from_factions(std::move(factions), ranks);
}

void FactionConfig::validate() const {
  if (ranks == 0) throw ConfigError("faction config has no ranks");
  if (factions.empty()) throw ConfigError("faction config has no factions");
  for (std::size_t f = 0; f < factions.size(); ++f) {
    if (factions[f].empty()) throw ConfigError("faction " + std::to_string(f) + " is empty");
    for (auto r : factions[f]) {
      if (r >= ranks) {
        throw ConfigError("faction " + std::to_string(f) + " names rank " + std::to_string(r) +
                          " but only " + std::to_string(ranks) + " ranks exist");
      }
    }
  }
  if (membership.size() != ranks) throw ConfigError("membership table size != rank count");
  for (std::size_t r = 0; r < ranks; ++r) {
    if (membership[r].empty()) {
      throw ConfigError("rank " + std::to_string(r) + " belongs to no faction");
    }
    for (auto f : membership[r]) {
      if (f >= factions.size()) {
        throw ConfigError("rank " + std::to_string(r) + " is a member of unknown faction " +
                          std::to_string(f));
      }
    }
  }
}

std::vector<RankId> FactionConfig::prefix(RankId p) const {
  std::vector<RankId> out;
  for (auto f : membership.at(p)) out.insert(out.end(), factions[f].begin(), factions[f].end());
  return out;
}

std::size_t FactionConfig::prefix_length(RankId p) const {
  std::size_t s = 0;
  for (auto f : membership.at(p)) s += factions[f].size();
  return s;
}

std::vector<RankId> FactionConfig::outsiders(RankId p) const {
  std::vector<bool> inside(ranks, false);
  for (auto f : membership.at(p)) {
    for (auto r : factions[f]) inside[r] = true;
  }
  std::vector<RankId> out;
  for (std::size_t r = 0; r < ranks; ++r) {
    if (!inside[r]) out.push_back(static_cast<RankId>(r));
  }
  return out;
}

FactionConfig parse_faction_file(std::istream& in, std::size_t ranks) {
  std::vector<std::vector<RankId>> factions;
  std::map<std::uint64_t, std::vector<std::size_t>> explicit_membership;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    const auto where = " (faction file line " + std::to_string(line_no) + ")";
    try {
      if (tok == "member") {
        std::string rank_tok;
        if (!(tokens >> rank_tok)) throw ConfigError("member line needs a rank");
        if (!rank_tok.empty() && rank_tok.back() == ':') rank_tok.pop_back();
        const auto rank = parse_uint(rank_tok, "rank");
        std::vector<std::size_t> list;
        while (tokens >> tok) {
          if (tok == ":") continue;
          list.push_back(parse_uint(tok, "faction index"));
        }
        if (list.empty()) throw ConfigError("member line lists no factions");
        explicit_membership[rank] = std::move(list);
        continue;
      }
      auto& f = factions.emplace_back();
      do {
        f.push_back(static_cast<RankId>(parse_uint(tok, "rank id")));
      } while (tokens >> tok);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what() + where);
    }
  }
  auto fc = FactionConfig::from_factions(std::move(factions), ranks);
  for (auto& [rank, list] : explicit_membership) {
    if (rank >= ranks) {
      throw ConfigError("member line for rank " + std::to_string(rank) + " but only " +
                        std::to_string(ranks) + " ranks exist");
    }
    fc.membership[rank] = std::move(list);
  }
  fc.validate();
  return fc;
}

FactionConfig read_faction_file(const std::filesystem::path& path, std::size_t ranks) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open faction file '" + path.string() + "'");
  return parse_faction_file(in, ranks);
}

FactionConfig parse_faction_shorthand(const std::string& spec, std::size_t ranks) {
  FactionConfig fc;
  if (spec == "all") {
    fc = FactionConfig::all_ranks(ranks);
  } else if (spec.rfind("blocks:", 0) == 0) {
    fc = FactionConfig::blocks(ranks, parse_uint(spec.substr(7), "block size"));
  } else {
    throw ConfigError("unknown faction shorthand '" + spec + "' (expected all|blocks:<m>)");
  }
  fc.validate();
  return fc;
}

void PbaParams::validate(const FactionConfig& fc) const {
  if (vertices_per_rank == 0) throw ConfigError("vertices per rank must be >= 1");
  if (edges_per_vertex == 0) throw ConfigError("edges per vertex must be >= 1");
  if (!(inter_faction_prob >= 0.0 && inter_faction_prob <= 1.0)) {
    throw ConfigError("inter-faction probability must lie in [0, 1]");
  }
  fc.validate();
  for (std::size_t r = 0; r < fc.ranks; ++r) {
    if (fc.prefix_length(static_cast<RankId>(r)) > slots()) {
      throw ConfigError("rank " + std::to_string(r) + " has faction prefix " +
                        std::to_string(fc.prefix_length(static_cast<RankId>(r))) +
                        " larger than n*k = " + std::to_string(slots()));
    }
  }
}

AssocList init_faction_prefix(RankId p, const FactionConfig& fc, const PbaParams& params) {
  const auto targets = fc.prefix(p);
  const auto k = params.edges_per_vertex;
  if (targets.size() > params.slots()) {
    throw ConfigError("faction prefix of rank " + std::to_string(p) + " (" +
                      std::to_string(targets.size()) + ") exceeds n*k = " +
                      std::to_string(params.slots()));
  }
  AssocList a;
  a.entries.reserve(params.slots());
  for (std::size_t j = 0; j < targets.size(); ++j) a.entries.push_back({j / k, targets[j]});
  return a;
}

Phase1Result phase1_associate(RankId p, const PbaParams& params, const FactionConfig& fc,
                              AssocList prefix, SplitMix64& rng) {
  Phase1Result out;
  out.assoc = std::move(prefix);
  auto& entries = out.assoc.entries;
  const auto total = params.slots();
  const auto k = params.edges_per_vertex;
  const auto s = entries.size();
  if (s == 0) throw ConfigError("phase 1 needs a faction prefix");
  entries.reserve(total);

  const auto outsiders = fc.outsiders(p);
  bool use_outsiders = params.inter_faction_prob > 0.0;
  if (use_outsiders && outsiders.empty()) {
    use_outsiders = false;
    out.inter_faction_disabled = true;
  }
  std::bernoulli_distribution cross(params.inter_faction_prob);
  std::uniform_int_distribution<std::size_t> pick_outsider(0, outsiders.empty() ? 0 : outsiders.size() - 1);

  for (std::uint64_t j = s; j < total; ++j) {
    std::uint64_t target = 0;
    if (use_outsiders && cross(rng)) {
      target = outsiders[pick_outsider(rng)];
    } else {
      std::uniform_int_distribution<std::uint64_t> earlier(0, j - 1);
      target = entries[earlier(rng)].target;
    }
    entries.push_back({j / k, target});
  }

  out.counts.assign(fc.ranks, 0);
  for (const auto& e : entries) ++out.counts[e.target];
  return out;
}

std::vector<std::vector<VertexId>> phase2_serve(RankId p, std::span<const std::uint64_t> requests,
                                                const PbaParams& params, SplitMix64& rng) {
  const auto n = params.vertices_per_rank;
  const auto k = params.edges_per_vertex;
  std::uint64_t m = 0;
  for (auto c : requests) m += c;

  std::vector<VertexId> drawn;
  drawn.reserve(m);
  if (m > 0) {
    std::vector<std::uint64_t> pool;
    pool.reserve(n * k + m);
    std::uint64_t done = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      pool.insert(pool.end(), k, i);
      const auto target =
          static_cast<std::uint64_t>((static_cast<unsigned __int128>(i + 1) * m) / n);
      for (; done < target; ++done) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const auto v = pool[pick(rng)];
        pool.push_back(v);
        drawn.push_back(static_cast<VertexId>(p) * n + v);
      }
    }
  }

  std::vector<std::vector<VertexId>> out(requests.size());
  std::size_t pos = 0;
  for (std::size_t r = 0; r < requests.size(); ++r) {
    out[r].assign(drawn.begin() + static_cast<std::ptrdiff_t>(pos),
                  drawn.begin() + static_cast<std::ptrdiff_t>(pos + requests[r]));
    pos += requests[r];
  }
  return out;
}

std::vector<Edge> phase2_substitute(RankId p, const Partition& partition, const AssocList& assoc,
                                    std::span<const std::vector<VertexId>> replies) {
  std::vector<std::uint64_t> occurrences(replies.size(), 0);
  for (const auto& e : assoc.entries) {
    if (e.target >= replies.size()) {
      throw ProtocolError("association targets rank " + std::to_string(e.target) +
                          " with no reply slot");
    }
    ++occurrences[e.target];
  }
  for (std::size_t q = 0; q < replies.size(); ++q) {
    if (occurrences[q] != replies[q].size()) {
      throw ProtocolError("rank " + std::to_string(q) + " sent " +
                          std::to_string(replies[q].size()) + " endpoints to rank " +
                          std::to_string(p) + " which needs " + std::to_string(occurrences[q]));
    }
  }
  std::vector<std::size_t> next(replies.size(), 0);
  std::vector<Edge> edges;
  edges.reserve(assoc.entries.size());
  for (const auto& e : assoc.entries) {
    edges.push_back({partition.global_id(p, e.local_vertex), replies[e.target][next[e.target]++]});
  }
  return edges;
}

EdgeList generate_pba(const PbaParams& params, const FactionConfig& fc,
                      const PbaOptions& options) {
  params.validate(fc);
  const auto ranks = fc.ranks;
  const Partition partition(ranks, params.vertices_per_rank);

  struct RankState {
    SplitMix64 rng;
    AssocList assoc;
    std::vector<Edge> edges;
    bool inter_faction_disabled = false;
  };
  std::vector<RankState> state(ranks);

  if (options.trace != nullptr) {
    auto& t = *options.trace;
    t = PbaTrace{};
    t.prefix_targets.resize(ranks);
    t.announced.assign(ranks, std::vector<std::uint64_t>(ranks, 0));
    t.served.assign(ranks, std::vector<std::uint64_t>(ranks, 0));
    t.substituted.assign(ranks, std::vector<std::uint64_t>(ranks, 0));
  }
  PbaTrace* trace = options.trace;

  Transport transport(ranks, options.workers);
  transport.set_volume_log(options.volume_log);

  // Phase 1: associate local edges with target ranks, announce counts.
  transport.superstep([&](RankContext& ctx) {
    const auto p = ctx.rank();
    auto& st = state[p];
    st.rng = rank_rng(params.master_seed, p);
    auto prefix = init_faction_prefix(p, fc, params);
    if (trace != nullptr) {
      for (const auto& e : prefix.entries) {
        trace->prefix_targets[p].push_back(static_cast<RankId>(e.target));
      }
    }
    auto result = phase1_associate(p, params, fc, std::move(prefix), st.rng);
    st.inter_faction_disabled = result.inter_faction_disabled;
    st.assoc = std::move(result.assoc);
    for (std::size_t q = 0; q < ranks; ++q) {
      if (result.counts[q] == 0) continue;
      if (trace != nullptr) trace->announced[p][q] = result.counts[q];
      ctx.send(static_cast<RankId>(q), MessageKind::kCountAnnouncement, {result.counts[q]});
    }
  });

  // Phase 2a: serve endpoint requests from local vertices.
  transport.superstep([&](RankContext& ctx) {
    const auto q = ctx.rank();
    std::vector<std::uint64_t> requests(ranks, 0);
    for (const auto& m : ctx.inbox()) {
      if (m.kind != MessageKind::kCountAnnouncement) {
        throw ProtocolError("unexpected message kind in count phase from rank " +
                            std::to_string(m.from));
      }
      requests[m.from] += m.payload.front();
    }
    auto lists = phase2_serve(q, requests, params, state[q].rng);
    for (std::size_t p = 0; p < ranks; ++p) {
      if (requests[p] == 0) continue;
      if (trace != nullptr) trace->served[p][q] = lists[p].size();
      ctx.send(static_cast<RankId>(p), MessageKind::kEndpointList,
               std::vector<std::uint64_t>(lists[p].begin(), lists[p].end()));
    }
  });

  // Phase 2b: substitute received endpoints into the association list.
  transport.superstep([&](RankContext& ctx) {
    const auto p = ctx.rank();
    std::vector<std::vector<VertexId>> replies(ranks);
    for (const auto& m : ctx.inbox()) {
      if (m.kind != MessageKind::kEndpointList) {
        throw ProtocolError("unexpected message kind in endpoint phase from rank " +
                            std::to_string(m.from));
      }
      auto& r = replies[m.from];
      r.insert(r.end(), m.payload.begin(), m.payload.end());
    }
    auto& st = state[p];
    st.edges = phase2_substitute(p, partition, st.assoc, replies);
    if (trace != nullptr) {
      for (const auto& e : st.edges) {
        const auto owner = partition.owner_of(e.v);
        ++trace->substituted[p][owner];
      }
    }
    st.assoc = {};
  });

  std::vector<std::vector<Edge>> segments(ranks);
  for (std::size_t r = 0; r < ranks; ++r) {
    if (state[r].inter_faction_disabled && options.warnings != nullptr) {
      *options.warnings << "warning: rank " << r
                        << " has no ranks outside its factions; inter-faction probability ignored\n";
    }
    if (trace != nullptr) trace->edges_per_rank.push_back(state[r].edges.size());
    segments[r] = std::move(state[r].edges);
  }
  return concatenate(std::move(segments), partition.vertex_count(), false);
}

}  // namespace sfg
