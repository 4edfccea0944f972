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

#include "sfgraph/transport.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <thread>

namespace sfg {

RankFailure::RankFailure(RankId rank, const std::string& what)
    : std::runtime_error("rank " + std::to_string(rank) + " failed: " + what), rank_(rank) {}

std::size_t RankContext::ranks() const { return transport_->ranks_; }
std::uint32_t RankContext::phase() const { return transport_->phase_; }

std::span<const Message> RankContext::inbox() const { return transport_->inbox_[rank_]; }

void RankContext::send(RankId to, MessageKind kind, std::vector<std::uint64_t> payload) {
  if (to >= transport_->ranks_) {
    throw ProtocolError("message from rank " + std::to_string(rank_) + " to out-of-range rank " +
                        std::to_string(to));
  }
  if (kind == MessageKind::kCountAnnouncement && payload.size() != 1) {
    throw ProtocolError("count announcement must carry exactly one value");
  }
  transport_->outbox_[rank_].push_back(
      Message{rank_, to, kind, transport_->phase_, std::move(payload)});
}

Transport::Transport(std::size_t ranks, std::size_t workers)
    : ranks_(ranks), workers_(workers), inbox_(ranks), outbox_(ranks) {
  if (ranks == 0) throw ConfigError("need at least one rank");
  if (workers == 0) throw ConfigError("need at least one worker");
  if (ranks > std::size_t{1} << 32) throw ConfigError("too many ranks");
}

void Transport::superstep(const std::function<void(RankContext&)>& step) {
  std::vector<std::exception_ptr> failures(ranks_);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t r = next.fetch_add(1); r < ranks_; r = next.fetch_add(1)) {
      RankContext ctx(*this, static_cast<RankId>(r));
      try {
        step(ctx);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  const auto threads = std::min(workers_, ranks_);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  for (std::size_t r = 0; r < ranks_; ++r) {
    if (!failures[r]) continue;
    try {
      std::rethrow_exception(failures[r]);
    } catch (const std::exception& e) {
      throw RankFailure(static_cast<RankId>(r), e.what());
    } catch (...) {
      throw RankFailure(static_cast<RankId>(r), "unknown exception");
    }
  }
  deliver();
  ++phase_;
}

void Transport::deliver() {
  for (auto& in : inbox_) in.clear();
  // Senders are visited in ascending order, so each inbox ends up grouped by
  // sender with per-sender send order preserved.
  for (std::size_t from = 0; from < ranks_; ++from) {
    auto& out = outbox_[from];
    if (volume_log_ != nullptr && !out.empty()) {
      std::vector<std::uint64_t> bytes(ranks_, 0);
      std::vector<bool> seen(ranks_, false);
      std::vector<RankId> order;
      for (const auto& m : out) {
        if (!seen[m.to]) order.push_back(m.to);
        seen[m.to] = true;
        bytes[m.to] += m.payload.size() * sizeof(std::uint64_t);
      }
      std::sort(order.begin(), order.end());
      for (auto to : order) {
        *volume_log_ << phase_ << ',' << from << ',' << to << ',' << bytes[to] << '\n';
      }
    }
    for (auto& m : out) inbox_[m.to].push_back(std::move(m));
    out.clear();
  }
}

}  // namespace sfg
