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

#include "sfgraph/pk.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sfgraph/transport.hpp"

namespace sfg {

std::uint64_t BoolMatrix::nnz() const {
  return static_cast<std::uint64_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> BoolMatrix::nonzeros() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c)) out.emplace_back(r, c);
    }
  }
  return out;
}

BoolMatrix kronecker_product(const BoolMatrix& a, const BoolMatrix& b, std::uint64_t cap) {
  if (a.rows() == 0 || a.cols() == 0 || b.rows() == 0 || b.cols() == 0) {
    throw std::invalid_argument("kronecker product of an empty matrix");
  }
  const auto rows = static_cast<unsigned __int128>(a.rows()) * b.rows();
  const auto cols = static_cast<unsigned __int128>(a.cols()) * b.cols();
  if (rows * cols > cap) {
    throw std::length_error("kronecker product exceeds the dense oracle cap of " +
                            std::to_string(cap) + " cells");
  }
  BoolMatrix out(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j)) continue;
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
          if (b(r, c)) out.set(i * b.rows() + r, j * b.cols() + c);
        }
      }
    }
  }
  return out;
}

SeedGraph::SeedGraph(BoolMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) throw ConfigError("seed matrix must be square");
  if (adjacency_.rows() < 2) throw ConfigError("seed graph needs n0 >= 2");
  nonzeros_ = adjacency_.nonzeros();
  if (nonzeros_.empty()) throw ConfigError("seed graph has no edges");
}

SeedGraph SeedGraph::from_nonzeros(
    std::size_t n0, std::span<const std::pair<std::uint64_t, std::uint64_t>> cells) {
  BoolMatrix m(n0, n0);
  for (auto [r, c] : cells) {
    if (r >= n0 || c >= n0) {
      throw ConfigError("seed entry (" + std::to_string(r) + ", " + std::to_string(c) +
                        ") outside " + std::to_string(n0) + "x" + std::to_string(n0));
    }
    m.set(r, c);
  }
  return SeedGraph(std::move(m));
}

SeedGraph parse_seed_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::uint64_t> n0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (parts.empty()) continue;
    auto num = [&](const std::string& t) {
      std::size_t used = 0;
      std::uint64_t v = 0;
      try {
        v = std::stoull(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != t.size() || t.front() == '-') {
        throw ConfigError("seed file line " + std::to_string(line_no) + ": bad number '" + t +
                          "'");
      }
      return v;
    };
    if (!n0) {
      if (parts.size() != 1) {
        throw ConfigError("seed file line " + std::to_string(line_no) + ": expected n0");
      }
      n0 = num(parts[0]);
      if (*n0 > 4096) throw ConfigError("seed graph larger than 4096 vertices");
      continue;
    }
    if (parts.size() != 2) {
      throw ConfigError("seed file line " + std::to_string(line_no) + ": expected 'r c'");
    }
    cells.emplace_back(num(parts[0]), num(parts[1]));
  }
  if (!n0) throw ConfigError("seed file is empty");
  return SeedGraph::from_nonzeros(*n0, cells);
}

SeedGraph read_seed_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open seed graph '" + path.string() + "'");
  return parse_seed_graph(in);
}

BoolMatrix kronecker_power(const SeedGraph& seed, unsigned iterations, std::uint64_t cap) {
  BoolMatrix out = seed.adjacency();
  for (unsigned i = 0; i < iterations; ++i) out = kronecker_product(out, seed.adjacency(), cap);
  return out;
}

PkNoise parse_noise(const std::string& spec) {
  if (spec == "none") return PkNoise::none();
  auto value = [&](std::size_t skip) { return spec.substr(skip); };
  try {
    if (spec.rfind("seed-perturb:", 0) == 0) {
      std::size_t used = 0;
      const auto v = value(13);
      const double p = std::stod(v, &used);
      if (used != v.size() || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("range");
      return PkNoise::seed_perturb(p);
    }
    if (spec.rfind("er-flip:", 0) == 0) {
      std::size_t used = 0;
      const auto v = value(8);
      if (v.empty() || v.front() == '-') throw std::invalid_argument("sign");
      const auto count = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return PkNoise::er_flip(count);
    }
  } catch (const std::exception&) {
    throw ConfigError("bad noise value '" + spec + "'");
  }
  throw ConfigError("unknown noise mode '" + spec + "' (expected none|seed-perturb:<p>|er-flip:<count>)");
}

std::uint64_t pk_vertex_count(const SeedGraph& seed, unsigned iterations) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i <= iterations; ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / seed.n0()) {
      throw ConfigError("n0^(T+1) overflows 64-bit vertex ids");
    }
    v *= seed.n0();
  }
  return v;
}

BoolMatrix apply_seed_perturbation(const SeedGraph& seed, double p_mod, SplitMix64& rng) {
  BoolMatrix out = seed.adjacency();
  std::bernoulli_distribution flip(p_mod);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      if (flip(rng)) out.set(r, c, !out(r, c));
    }
  }
  return out;
}

ChildPattern::ChildPattern(const SeedGraph& seed, const PkNoise& noise, std::uint64_t master_seed)
    : seed_(&seed), master_seed_(master_seed) {
  if (noise.kind == PkNoise::Kind::kSeedPerturb) p_mod_ = noise.p_mod;
}

void ChildPattern::children(const MetaEdge& parent, std::vector<MetaEdge>& out) const {
  const auto n0 = seed_->n0();
  const auto next = parent.iteration + 1;
  if (p_mod_ <= 0.0) {
    for (auto [r, c] : seed_->nonzeros()) out.push_back({next, parent.row * n0 + r, parent.col * n0 + c});
    return;
  }
  SplitMix64 rng(mix64(mix64(mix64(master_seed_, parent.iteration), parent.row), parent.col));
  const auto m = apply_seed_perturbation(*seed_, p_mod_, rng);
  for (std::size_t r = 0; r < n0; ++r) {
    for (std::size_t c = 0; c < n0; ++c) {
      if (m(r, c)) out.push_back({next, parent.row * n0 + r, parent.col * n0 + c});
    }
  }
}

ExpansionStats expand_meta_edges(const ChildPattern& pattern, std::span<const MetaEdge> start,
                                 unsigned iterations, const EdgeSink& emit) {
  ExpansionStats stats;
  std::vector<MetaEdge> stack(start.begin(), start.end());
  std::vector<MetaEdge> kids;
  stats.max_stack_depth = stack.size();
  while (!stack.empty()) {
    const auto top = stack.back();
    stack.pop_back();
    if (top.iteration >= iterations) {
      emit(Edge{top.row, top.col});
      ++stats.emitted;
      continue;
    }
    kids.clear();
    pattern.children(top, kids);
    stack.insert(stack.end(), kids.begin(), kids.end());
    stats.max_stack_depth = std::max(stats.max_stack_depth, stack.size());
  }
  return stats;
}

ExpansionStats expand_meta_edges(const SeedGraph& seed, unsigned iterations, const EdgeSink& emit,
                                 const PkNoise& noise, std::uint64_t master_seed) {
  const ChildPattern pattern(seed, noise, master_seed);
  std::vector<MetaEdge> start;
  for (auto [r, c] : seed.nonzeros()) start.push_back({0, r, c});
  return expand_meta_edges(pattern, start, iterations, emit);
}

std::vector<GroupShare> partition_groups(const ProcessorGroup& group, std::uint64_t meta_edges) {
  if (group.size == 0) throw ConfigError("processor group is empty");
  if (meta_edges == 0) throw std::invalid_argument("no meta-edges to partition");
  std::vector<GroupShare> shares;
  const auto next_iter = group.iteration + 1;
  if (group.size > meta_edges) {
    const auto base = group.size / meta_edges;
    const auto extra = group.size % meta_edges;
    RankId first = group.first;
    for (std::uint64_t j = 0; j < meta_edges; ++j) {
      const auto size = base + (j < extra ? 1 : 0);
      shares.push_back({{first, size, next_iter}, j, j + 1});
      first += static_cast<RankId>(size);
    }
  } else {
    const auto base = meta_edges / group.size;
    const auto extra = meta_edges % group.size;
    std::uint64_t begin = 0;
    for (std::size_t j = 0; j < group.size; ++j) {
      const auto count = base + (j < extra ? 1 : 0);
      shares.push_back({{static_cast<RankId>(group.first + j), 1, next_iter}, begin, begin + count});
      begin += count;
    }
  }
  return shares;
}

std::vector<Edge> sample_flip_cells(std::uint64_t flip_count, std::uint64_t vertex_count,
                                    SplitMix64& rng) {
  std::vector<Edge> cells;
  if (flip_count == 0) return cells;
  if (vertex_count == 0) throw ConfigError("cannot flip cells of an empty graph");
  std::uniform_int_distribution<std::uint64_t> pick(0, vertex_count - 1);
  cells.reserve(flip_count);
  for (std::uint64_t i = 0; i < flip_count; ++i) {
    const auto u = pick(rng);
    cells.push_back({u, pick(rng)});
  }
  return cells;
}

EdgeList apply_er_flip(const EdgeList& edges, std::span<const Edge> cells) {
  EdgeList base = edges;
  dedupe(base);
  std::vector<Edge> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Edge> odd;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if ((j - i) % 2 == 1) odd.push_back(sorted[i]);
    i = j;
  }
  EdgeList out;
  out.vertex_count = edges.vertex_count;
  out.directed = edges.directed;
  out.edges.reserve(base.edges.size() + odd.size());
  std::set_symmetric_difference(base.edges.begin(), base.edges.end(), odd.begin(), odd.end(),
                                std::back_inserter(out.edges));
  return out;
}

EdgeList apply_er_flip(const EdgeList& edges, std::uint64_t flip_count, SplitMix64& rng) {
  const auto cells = sample_flip_cells(flip_count, edges.vertex_count, rng);
  return apply_er_flip(edges, cells);
}

EdgeList generate_pk(std::size_t ranks, const SeedGraph& seed, const PkParams& params,
                     const PkOptions& options) {
  const auto vertex_count = pk_vertex_count(seed, params.iterations);
  if (params.noise.kind == PkNoise::Kind::kSeedPerturb &&
      !(params.noise.p_mod >= 0.0 && params.noise.p_mod <= 1.0)) {
    throw ConfigError("seed perturbation probability must lie in [0, 1]");
  }
  const ChildPattern pattern(seed, params.noise, params.master_seed);
  const auto T = params.iterations;

  std::vector<std::vector<Edge>> segments(ranks);
  std::vector<std::size_t> depth(ranks, 0);

  Transport transport(ranks, options.workers);
  transport.set_volume_log(options.volume_log);
  transport.superstep([&](RankContext& ctx) {
    const auto me = ctx.rank();
    auto& out = segments[me];
    auto sink = [&out](const Edge& e) { out.push_back(e); };

    ProcessorGroup group{0, ranks, 0};
    std::vector<MetaEdge> level;
    for (auto [r, c] : seed.nonzeros()) level.push_back({0, r, c});

    // Every rank walks the same deterministic split arithmetic, so no
    // messages are needed to agree on who owns which meta-edges.
    while (!level.empty()) {
      const auto shares = partition_groups(group, level.size());
      const auto mine = std::find_if(shares.begin(), shares.end(), [&](const GroupShare& s) {
        return s.members.contains(me);
      });
      if (group.size <= level.size()) {
        const std::span<const MetaEdge> slice(level.data() + mine->begin, mine->count());
        depth[me] = expand_meta_edges(pattern, slice, T, sink).max_stack_depth;
        return;
      }
      const auto chosen = level[mine->begin];
      if (chosen.iteration >= T) {
        if (me == mine->members.first) {
          out.push_back({chosen.row, chosen.col});
          depth[me] = 1;
        }
        return;
      }
      group = mine->members;
      level.clear();
      pattern.children(chosen, level);
    }
  });

  if (options.stats != nullptr) {
    auto& s = *options.stats;
    s = PkStats{};
    for (std::size_t r = 0; r < ranks; ++r) s.edges_per_rank.push_back(segments[r].size());
    s.max_stack_depth_per_rank = depth;
    s.max_stack_depth = ranks == 0 ? 0 : *std::max_element(depth.begin(), depth.end());
  }

  auto graph = concatenate(std::move(segments), vertex_count, true);
  if (params.noise.kind == PkNoise::Kind::kErFlip) {
    SplitMix64 rng(mix64(params.master_seed, 0x65722d666c6970ULL));
    graph = apply_er_flip(graph, params.noise.flip_count, rng);
  }
  return graph;
}

}  // namespace sfg
