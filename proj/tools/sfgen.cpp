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

// Command-line front end: generate-pba, generate-pk, metrics, raster.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sfgraph/graph.hpp"
#include "sfgraph/io.hpp"
#include "sfgraph/metrics.hpp"
#include "sfgraph/pba.hpp"
#include "sfgraph/pk.hpp"
#include "sfgraph/report.hpp"

namespace {

struct Common {
  std::size_t ranks = 1;
  std::size_t workers = 1;
  std::uint64_t seed = sfg::kDefaultMasterSeed;
  std::string output;
  std::string format = "binary";
  bool dedupe = false;
  std::string message_log;
};

// Re-throws a ConfigError with the responsible flag named.
template <class Fn>
auto with_flag(const std::string& flag, Fn&& fn) {
  try {
    return fn();
  } catch (const sfg::ConfigError& e) {
    throw sfg::ConfigError(flag + ": " + e.what());
  }
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--ranks", c.ranks, "Logical ranks (algorithmic decomposition)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("-o,--output", c.output, "Output edge list")->required();
  cmd->add_option("--format", c.format, "text|binary")
      ->check(CLI::IsMember({"text", "binary"}));
  cmd->add_flag("--dedupe", c.dedupe, "Sort and drop duplicate edges before writing");
  cmd->add_option("--message-log", c.message_log,
                  "Write per-phase message volumes as phase,from,to,bytes");
}

class MessageLog {
 public:
  explicit MessageLog(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw sfg::ConfigError("--message-log: cannot open '" + path + "'");
    *file_ << "phase,from,to,bytes\n";
  }
  std::ostream* get() { return file_ ? file_.get() : nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_summary(const std::string& command, const Common& c, const sfg::EdgeList& g,
                   std::uint64_t bytes, std::span<const std::uint64_t> per_rank, double seconds) {
  std::cout << "command=" << command << '\n'
            << "vertices=" << g.vertex_count << '\n'
            << "edges=" << g.edges.size() << '\n'
            << "ranks=" << c.ranks << '\n'
            << "workers=" << c.workers << '\n'
            << "seed=" << c.seed << '\n'
            << "output=" << c.output << '\n'
            << "format=" << c.format << '\n'
            << "bytes=" << bytes << '\n'
            << "edges_per_rank=";
  for (std::size_t i = 0; i < per_rank.size(); ++i) std::cout << (i ? "," : "") << per_rank[i];
  std::cout << '\n' << "wall_time_s=" << sfg::format_decimal(seconds) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel scale-free graph generator and analyzer"};
  app.require_subcommand(1);

  Common pba_common;
  sfg::PbaParams pba;
  std::string factions_file;
  std::string factions = "all";
  auto* gen_pba = app.add_subcommand("generate-pba", "Two-phase preferential attachment");
  add_common(gen_pba, pba_common);
  gen_pba->add_option("--vertices-per-rank", pba.vertices_per_rank)->check(CLI::PositiveNumber);
  gen_pba->add_option("--edges-per-vertex", pba.edges_per_vertex)->check(CLI::PositiveNumber);
  gen_pba->add_option("--inter-faction-prob", pba.inter_faction_prob)->check(CLI::Range(0.0, 1.0));
  auto* ff = gen_pba->add_option("--factions-file", factions_file, "Faction configuration file");
  gen_pba->add_option("--factions", factions, "all | blocks:<m>")->excludes(ff);

  Common pk_common;
  sfg::PkParams pk;
  std::string seed_graph;
  std::string noise = "none";
  auto* gen_pk = app.add_subcommand("generate-pk", "Stack-based parallel Kronecker expansion");
  add_common(gen_pk, pk_common);
  gen_pk->add_option("--seed-graph", seed_graph, "Seed graph file")->required();
  gen_pk->add_option("--iterations", pk.iterations, "Final iteration T");
  gen_pk->add_option("--noise", noise, "none | seed-perturb:<p> | er-flip:<count>");

  std::string metrics_input;
  std::string sources = "default";
  std::string degree_csv;
  std::size_t metrics_workers = 1;
  std::uint64_t metrics_seed = sfg::kDefaultMasterSeed;
  auto* metrics = app.add_subcommand("metrics", "Degree distribution, power-law fit, path lengths");
  metrics->add_option("input", metrics_input, "Edge list (text or binary)")->required();
  metrics->add_option("--sources", sources, "BFS sources: <n> | all");
  metrics->add_option("--degree-csv", degree_csv, "Write the degree histogram as k,count");
  metrics->add_option("--workers", metrics_workers)->check(CLI::PositiveNumber);
  metrics->add_option("--seed", metrics_seed, "Seed for source sampling");

  std::string raster_input;
  std::string raster_output;
  std::size_t resolution = 512;
  bool ascii = false;
  auto* raster = app.add_subcommand("raster", "Adjacency-matrix raster as PGM");
  raster->add_option("input", raster_input, "Edge list (text or binary)")->required();
  raster->add_option("-o,--output", raster_output, "Output PGM")->required();
  raster->add_option("--resolution", resolution)->check(CLI::PositiveNumber);
  raster->add_flag("--ascii", ascii, "Write P2 instead of P5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_pba) {
      const auto t0 = std::chrono::steady_clock::now();
      auto& c = pba_common;
      pba.master_seed = c.seed;
      const auto fc = factions_file.empty()
                          ? with_flag("--factions",
                                      [&] { return sfg::parse_faction_shorthand(factions, c.ranks); })
                          : with_flag("--factions-file",
                                      [&] { return sfg::read_faction_file(factions_file, c.ranks); });
      with_flag("--vertices-per-rank/--edges-per-vertex", [&] { pba.validate(fc); });
      MessageLog log(c.message_log);
      sfg::PbaTrace trace;
      const auto g = sfg::generate_pba(pba, fc, {c.workers, &trace, log.get(), &std::cerr});
      const auto bytes =
          sfg::write_edge_list(g, sfg::parse_edge_format(c.format), c.output, c.dedupe);
      print_summary("generate-pba", c, g, bytes, trace.edges_per_rank, seconds_since(t0));
    } else if (*gen_pk) {
      const auto t0 = std::chrono::steady_clock::now();
      auto& c = pk_common;
      pk.master_seed = c.seed;
      pk.noise = with_flag("--noise", [&] { return sfg::parse_noise(noise); });
      const auto seed = with_flag("--seed-graph", [&] { return sfg::read_seed_graph(seed_graph); });
      with_flag("--iterations", [&] { return sfg::pk_vertex_count(seed, pk.iterations); });
      MessageLog log(c.message_log);
      sfg::PkStats stats;
      const auto g = sfg::generate_pk(c.ranks, seed, pk, {c.workers, &stats, log.get()});
      const auto bytes =
          sfg::write_edge_list(g, sfg::parse_edge_format(c.format), c.output, c.dedupe);
      print_summary("generate-pk", c, g, bytes, stats.edges_per_rank, seconds_since(t0));
      std::cout << "max_stack_depth=" << stats.max_stack_depth << '\n';
    } else if (*metrics) {
      std::uint64_t n_sources = 0;
      if (sources == "all") {
        n_sources = UINT64_MAX;
      } else if (sources != "default") {
        n_sources = with_flag("--sources", [&] {
          std::size_t used = 0;
          std::uint64_t v = 0;
          try {
            v = std::stoull(sources, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used == 0 || used != sources.size() || v == 0 || sources.front() == '-') {
            throw sfg::ConfigError("expected a positive count or 'all', got '" + sources + "'");
          }
          return v;
        });
      }
      const auto g = sfg::read_edge_list(metrics_input);
      const auto report = sfg::analyze(g, n_sources, metrics_seed, metrics_workers);
      sfg::write_report(report, std::cout);
      if (!degree_csv.empty()) {
        std::ofstream out(degree_csv);
        if (!out) throw std::runtime_error("cannot open '" + degree_csv + "'");
        sfg::write_degree_csv(report.histogram, out);
      }
    } else if (*raster) {
      const auto g = sfg::read_edge_list(raster_input);
      sfg::write_pgm(sfg::adjacency_raster(g, resolution), raster_output, ascii);
      std::cout << "output=" << raster_output << '\n' << "resolution=" << resolution << '\n';
    }
  } catch (const sfg::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
