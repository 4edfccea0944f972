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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "sfgraph/graph.hpp"

namespace sfg {

enum class MessageKind : std::uint8_t { kCountAnnouncement, kEndpointList, kUser };

struct Message {
  RankId from = 0;
  RankId to = 0;
  MessageKind kind = MessageKind::kUser;
  std::uint32_t phase = 0;  // superstep in which it was sent
  std::vector<std::uint64_t> payload;
};

/// A rank procedure threw; the whole run is aborted.
class RankFailure : public std::runtime_error {
 public:
  RankFailure(RankId rank, const std::string& what);
  RankId rank() const { return rank_; }

 private:
  RankId rank_;
};

class Transport;

/// What a rank sees during one superstep.
class RankContext {
 public:
  RankId rank() const { return rank_; }
  std::size_t ranks() const;
  std::uint32_t phase() const;

  /// Messages sent to this rank during the previous superstep, grouped by
  /// ascending sender, each sender's messages in send order.
  std::span<const Message> inbox() const;

  /// Queued for delivery at the next barrier. Throws ProtocolError for an
  /// out-of-range destination and for a count announcement whose payload is
  /// not exactly one element.
  void send(RankId to, MessageKind kind, std::vector<std::uint64_t> payload);

 private:
  friend class Transport;
  RankContext(Transport& t, RankId r) : transport_(&t), rank_(r) {}
  Transport* transport_;
  RankId rank_;
};

/// Bulk-synchronous simulation of `ranks` logical processors on `workers`
/// threads. Each call to superstep() runs the step for every rank, then
/// delivers all queued messages before returning.
class Transport {
 public:
  Transport(std::size_t ranks, std::size_t workers);

  std::size_t ranks() const { return ranks_; }
  std::size_t workers() const { return workers_; }
  std::uint32_t phase() const { return phase_; }

  /// Emits "phase,from,to,bytes" lines, one per (sender, receiver) batch.
  void set_volume_log(std::ostream* out) { volume_log_ = out; }

  void superstep(const std::function<void(RankContext&)>& step);

 private:
  friend class RankContext;

  void deliver();

  std::size_t ranks_;
  std::size_t workers_;
  std::uint32_t phase_ = 0;
  std::vector<std::vector<Message>> inbox_;
  std::vector<std::vector<Message>> outbox_;
  std::ostream* volume_log_ = nullptr;
};

/// Runs `fn` once per rank in a single superstep and collects the results
/// in rank order.
template <class Fn>
auto run_ranks(std::size_t ranks, std::size_t workers, Fn&& fn) {
  using Result = std::invoke_result_t<Fn&, RankContext&>;
  std::vector<Result> out(ranks);
  Transport t(ranks, workers);
  t.superstep([&](RankContext& ctx) { out[ctx.rank()] = fn(ctx); });
  return out;
}

}  // namespace sfg
