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

#include "sfgraph/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

namespace sfg {

UndirectedGraph::UndirectedGraph(const EdgeList& g) {
  const auto n = g.vertex_count;
  g.validate();
  std::vector<Edge> pairs;
  pairs.reserve(g.edges.size());
  for (const auto& e : g.edges) pairs.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  unique_edges_ = pairs.size();

  degree_.assign(n, 0);
  offsets_.assign(n + 1, 0);
  for (const auto& e : pairs) {
    if (e.u == e.v) {
      degree_[e.u] += 2;
      continue;
    }
    ++degree_[e.u];
    ++degree_[e.v];
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(offsets_.back());
  std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : pairs) {
    if (e.u == e.v) continue;
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
}

std::uint64_t DegreeHistogram::vertex_total() const {
  std::uint64_t s = 0;
  for (const auto& b : bins) s += b.count;
  return s;
}

std::uint64_t DegreeHistogram::degree_sum() const {
  std::uint64_t s = 0;
  for (const auto& b : bins) s += b.degree * b.count;
  return s;
}

DegreeHistogram degree_distribution(const UndirectedGraph& g) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (VertexId v = 0; v < g.vertex_count(); ++v) ++counts[g.degree(v)];
  DegreeHistogram h;
  for (auto [k, c] : counts) h.bins.push_back({k, c});
  return h;
}

DegreeHistogram degree_distribution(const EdgeList& g) {
  if (g.vertex_count == 0) throw std::invalid_argument("degree distribution of an empty graph");
  return degree_distribution(UndirectedGraph(g));
}

PowerLawFit fit_power_law(const DegreeHistogram& h) {
  std::map<int, std::uint64_t> mass;
  for (const auto& b : h.bins) {
    if (b.degree == 0 || b.count == 0) continue;
    mass[static_cast<int>(std::bit_width(b.degree)) - 1] += b.count;
  }
  if (mass.size() < kMinFitBins) {
    throw InsufficientData("power-law fit needs at least " + std::to_string(kMinFitBins) +
                           " non-empty logarithmic bins, got " + std::to_string(mass.size()));
  }
  std::vector<double> xs, ys;
  for (auto [b, m] : mass) {
    const double lo = std::ldexp(1.0, b);
    const double hi = std::ldexp(1.0, b + 1) - 1.0;
    const double width = hi - lo + 1.0;
    xs.push_back(std::log(std::sqrt(lo * hi)));
    ys.push_back(std::log(static_cast<double>(m) / width));
  }
  // The power-law regime starts at the densest bin. Sparse bins below it are
  // stragglers under the generator's minimum degree and would flatten the line.
  const auto peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  xs.erase(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(peak));
  ys.erase(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(peak));
  if (xs.size() < kMinFitBins) {
    throw InsufficientData("power-law fit needs at least " + std::to_string(kMinFitBins) +
                           " logarithmic bins from the densest one on, got " +
                           std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  PowerLawFit fit;
  fit.gamma = -slope;
  fit.intercept = my - slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.bins_used = xs.size();
  return fit;
}

std::uint64_t default_source_count(std::uint64_t vertex_count) {
  return std::max<std::uint64_t>(32, (vertex_count + 999) / 1000);
}

PathStats path_stats(const UndirectedGraph& g, std::uint64_t sources, SplitMix64& rng,
                     std::size_t workers) {
  const auto n = g.vertex_count();
  bool has_edge = false;
  for (VertexId v = 0; v < n && !has_edge; ++v) has_edge = !g.neighbors(v).empty();
  if (!has_edge) throw std::invalid_argument("path statistics need an edge between distinct vertices");
  if (sources == 0) throw std::invalid_argument("path statistics need at least one source");

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  if (sources < n) {
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(sources);
  }

  struct Partial {
    std::uint64_t sum = 0, pairs = 0, unreachable = 0, max = 0;
  };
  const auto threads = std::max<std::size_t>(1, std::min<std::size_t>(workers, order.size()));
  std::vector<Partial> partial(threads);
  std::atomic<std::size_t> next{0};

  auto work = [&](std::size_t slot) {
    std::vector<std::uint32_t> dist(n, UINT32_MAX);
    std::vector<VertexId> frontier;
    frontier.reserve(n);
    auto& acc = partial[slot];
    for (auto i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1)) {
      const auto s = order[i];
      frontier.clear();
      frontier.push_back(s);
      dist[s] = 0;
      for (std::size_t head = 0; head < frontier.size(); ++head) {
        const auto u = frontier[head];
        for (auto w : g.neighbors(u)) {
          if (dist[w] != UINT32_MAX) continue;
          dist[w] = dist[u] + 1;
          frontier.push_back(w);
        }
      }
      for (std::size_t j = 1; j < frontier.size(); ++j) {
        acc.sum += dist[frontier[j]];
        acc.max = std::max<std::uint64_t>(acc.max, dist[frontier[j]]);
      }
      acc.pairs += frontier.size() - 1;
      acc.unreachable += n - frontier.size();
      for (auto v : frontier) dist[v] = UINT32_MAX;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  PathStats out;
  std::uint64_t sum = 0;
  for (const auto& p : partial) {
    sum += p.sum;
    out.pairs_sampled += p.pairs;
    out.unreachable_pairs += p.unreachable;
    out.diameter_estimate = std::max(out.diameter_estimate, p.max);
  }
  out.sources_sampled = order.size();
  out.avg_path_length =
      out.pairs_sampled == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(out.pairs_sampled);
  return out;
}

std::vector<std::uint8_t> Raster::intensities() const {
  const auto peak = counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
  std::vector<std::uint8_t> out(counts_.size(), 0);
  if (peak == 0) return out;
  const double denom = std::log1p(static_cast<double>(peak));
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    const double v = std::round(255.0 * std::log1p(static_cast<double>(counts_[i])) / denom);
    out[i] = static_cast<std::uint8_t>(std::clamp(v, 1.0, 255.0));
  }
  return out;
}

Raster adjacency_raster(const EdgeList& g, std::size_t resolution) {
  if (resolution == 0) throw std::invalid_argument("raster resolution must be >= 1");
  g.validate();
  Raster r(resolution);
  if (g.vertex_count == 0) return r;
  auto pixel = [&](VertexId v) {
    return static_cast<std::size_t>(static_cast<unsigned __int128>(v) * resolution /
                                    g.vertex_count);
  };
  for (const auto& e : g.edges) r.add(pixel(e.u), pixel(e.v));
  return r;
}

void write_pgm(const Raster& raster, std::ostream& out, bool ascii) {
  const auto res = raster.resolution();
  const auto px = raster.intensities();
  out << (ascii ? "P2\n" : "P5\n") << res << ' ' << res << "\n255\n";
  if (ascii) {
    for (std::size_t r = 0; r < res; ++r) {
      for (std::size_t c = 0; c < res; ++c) {
        out << static_cast<unsigned>(px[r * res + c]) << (c + 1 == res ? '\n' : ' ');
      }
    }
  } else {
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  }
  if (!out) throw std::runtime_error("raster write failed");
}

void write_pgm(const Raster& raster, const std::filesystem::path& path, bool ascii) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  try {
    write_pgm(raster, out, ascii);
  } catch (const std::exception& e) {
    throw std::runtime_error("writing '" + path.string() + "': " + e.what());
  }
}

void write_degree_csv(const DegreeHistogram& h, std::ostream& out) {
  out << "k,count\n";
  for (const auto& b : h.bins) out << b.degree << ',' << b.count << '\n';
}

}  // namespace sfg
