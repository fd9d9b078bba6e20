// Copyright 2026 The divminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "divminer/miner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "divminer/error.hpp"
#include "logging.hpp"

namespace divminer {
namespace {

constexpr int32_t kNone = -1;
constexpr uint32_t kRootRank = std::numeric_limits<uint32_t>::max();

struct Accumulator {
  uint64_t matches = 0;
  Moments outcome;

  void add(const Accumulator& other) {
    matches += other.matches;
    outcome += other.outcome;
  }
};

// Prefix tree over item ranks (0 = most frequent). Paths from the root visit
// ranks in increasing order; every node carries the accumulated weight of
// the transactions sharing that prefix.
class FpTree {
 public:
  struct Node {
    uint32_t rank = kRootRank;
    int32_t parent = kNone;
    int32_t first_child = kNone;
    int32_t next_sibling = kNone;
    Accumulator acc;
  };

  explicit FpTree(size_t num_ranks) : heads_(num_ranks) { nodes_.emplace_back(); }

  void insert(std::span<const uint32_t> ranks, const Accumulator& weight) {
    int32_t current = 0;
    for (uint32_t rank : ranks) {
      int32_t child = nodes_[current].first_child;
      while (child != kNone && nodes_[child].rank != rank) child = nodes_[child].next_sibling;
      if (child == kNone) {
        child = static_cast<int32_t>(nodes_.size());
        Node node;
        node.rank = rank;
        node.parent = current;
        node.next_sibling = nodes_[current].first_child;
        nodes_.push_back(node);
        nodes_[current].first_child = child;
        heads_[rank].push_back(child);
      }
      nodes_[child].acc.add(weight);
      current = child;
    }
  }

  size_t num_ranks() const { return heads_.size(); }
  const std::vector<int32_t>& nodes_of(uint32_t rank) const { return heads_[rank]; }
  const Node& node(int32_t index) const { return nodes_[index]; }

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<int32_t>> heads_;
};

struct RawRecord {
  std::vector<ItemId> items;
  Accumulator acc;
};

struct CapReached {};

// Per-worker output plus the shared cap bookkeeping.
class Sink {
 public:
  Sink(const std::vector<ItemId>& rank_to_item, std::atomic<uint64_t>& emitted,
       std::atomic<bool>& stop, uint64_t cap)
      : rank_to_item_(rank_to_item), emitted_(emitted), stop_(stop), cap_(cap) {}

  void emit(const std::vector<uint32_t>& prefix, const Accumulator& acc) {
    if (stop_.load(std::memory_order_relaxed)) throw CapReached{};
    // The empty itemset is counted too.
    if (emitted_.fetch_add(1, std::memory_order_relaxed) + 2 > cap_) {
      stop_.store(true);
      throw CapReached{};
    }
    RawRecord record;
    record.items.reserve(prefix.size());
    for (uint32_t rank : prefix) record.items.push_back(rank_to_item_[rank]);
    record.acc = acc;
    records.push_back(std::move(record));
  }

  std::vector<RawRecord> records;

 private:
  const std::vector<ItemId>& rank_to_item_;
  std::atomic<uint64_t>& emitted_;
  std::atomic<bool>& stop_;
  uint64_t cap_;
};

class Grower {
 public:
  explicit Grower(uint64_t min_count) : min_count_(min_count) {}

  // Emits prefix + rank and recurses into rank's conditional tree.
  void extend(const FpTree& tree, uint32_t rank, std::vector<uint32_t>& prefix, Sink& sink) const {
    const auto& nodes = tree.nodes_of(rank);
    if (nodes.empty()) return;
    Accumulator total;
    for (int32_t n : nodes) total.add(tree.node(n).acc);
    if (total.matches < min_count_) return;

    prefix.push_back(rank);
    sink.emit(prefix, total);

    // Conditional pattern base: ancestors of every rank node, weighted by
    // the node. Only ranks below `rank` can be ancestors.
    std::vector<uint64_t> counts(rank, 0);
    bool any_frequent = false;
    for (int32_t n : nodes) {
      const uint64_t w = tree.node(n).acc.matches;
      for (int32_t a = tree.node(n).parent; a != 0; a = tree.node(a).parent) {
        const uint32_t r = tree.node(a).rank;
        counts[r] += w;
        any_frequent |= counts[r] >= min_count_;
      }
    }
    if (any_frequent) {
      FpTree conditional(rank);
      std::vector<uint32_t> path;
      for (int32_t n : nodes) {
        path.clear();
        for (int32_t a = tree.node(n).parent; a != 0; a = tree.node(a).parent) {
          const uint32_t r = tree.node(a).rank;
          if (counts[r] >= min_count_) path.push_back(r);
        }
        if (path.empty()) continue;
        std::reverse(path.begin(), path.end());
        conditional.insert(path, tree.node(n).acc);
      }
      grow(conditional, prefix, sink);
    }
    prefix.pop_back();
  }

  void grow(const FpTree& tree, std::vector<uint32_t>& prefix, Sink& sink) const {
    for (size_t r = tree.num_ranks(); r-- > 0;) {
      extend(tree, static_cast<uint32_t>(r), prefix, sink);
    }
  }

 private:
  uint64_t min_count_;
};

}  // namespace

std::string_view to_string(Baseline baseline) {
  return baseline == Baseline::kGlobal ? "global" : "complement";
}

std::string_view to_string(Sign sign) {
  switch (sign) {
    case Sign::kPositive: return "pos";
    case Sign::kNegative: return "neg";
    case Sign::kAbsolute: return "abs";
  }
  return "?";
}

std::optional<Sign> parse_sign(std::string_view text) {
  if (text == "pos" || text == "positive") return Sign::kPositive;
  if (text == "neg" || text == "negative") return Sign::kNegative;
  if (text == "abs" || text == "absolute") return Sign::kAbsolute;
  return std::nullopt;
}

MiningResult::MiningResult(std::shared_ptr<const ItemDictionary> dictionary,
                           std::vector<ItemsetRecord> records, MiningMetadata metadata)
    : dictionary_(std::move(dictionary)),
      records_(std::move(records)),
      metadata_(std::move(metadata)) {
  std::sort(records_.begin(), records_.end(), [](const ItemsetRecord& a, const ItemsetRecord& b) {
    return canonical_less(a.itemset, b.itemset);
  });
  if (records_.empty() || !records_.front().itemset.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mining result lacks the empty itemset");
  }
  index_.reserve(records_.size());
  for (size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].itemset, i).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate itemset '" + itemset_label(*dictionary_, records_[i].itemset) + "'");
    }
  }
}

const ItemsetRecord* MiningResult::find(const Itemset& itemset) const {
  auto it = index_.find(itemset);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::optional<size_t> MiningResult::index_of(const Itemset& itemset) const {
  auto it = index_.find(itemset);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

uint64_t min_match_count(double threshold, uint64_t n_rows) {
  const double n = static_cast<double>(n_rows);
  auto qualifies = [&](uint64_t c) { return static_cast<double>(c) / n >= threshold; };
  auto c = static_cast<uint64_t>(std::ceil(threshold * n));
  while (c > 0 && qualifies(c - 1)) --c;
  while (c < n_rows && !qualifies(c)) ++c;
  return c;
}

ItemsetRecord make_record(Itemset itemset, uint64_t matches, const Moments& group,
                          const Moments& global, double shift, uint64_t n_rows,
                          Baseline baseline) {
  ItemsetRecord record;
  record.itemset = std::move(itemset);
  record.match_count = matches;
  record.support = n_rows ? static_cast<double>(matches) / static_cast<double>(n_rows) : 0.0;
  record.outcome_count = group.count;
  const double n = static_cast<double>(group.count);
  record.outcome_sum = group.sum + n * shift;
  record.outcome_sum_sq = group.sum_sq + 2.0 * shift * group.sum + n * shift * shift;
  if (group.count == 0) {
    record.outcome_mean = std::numeric_limits<double>::quiet_NaN();
    record.divergence = std::numeric_limits<double>::quiet_NaN();
    return record;
  }
  record.outcome_mean = shift + group.mean();
  record.divergence = group.mean() - global.mean();
  if (record.itemset.empty()) {
    record.t_value = 0.0;
  } else {
    record.t_value =
        welch_t(group, baseline == Baseline::kGlobal ? global : global - group);
  }
  return record;
}

MiningResult mine(const DiscretizedDataset& dataset, const OutcomeVector& outcome,
                  const MineOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "support threshold must lie in (0, 1]");
  }
  const uint64_t n_rows = dataset.num_rows();
  if (outcome.size() != n_rows) {
    throw Error(ErrorCode::kInvalidArgument,
                "outcome has " + std::to_string(outcome.size()) + " values for " +
                    std::to_string(n_rows) + " rows");
  }
  if (outcome.global_count() == 0) {
    throw Error(ErrorCode::kUndefinedOutcome, "global outcome is undefined: every row is excluded");
  }
  if (options.max_records < 1) {
    throw Error(ErrorCode::kInvalidArgument, "record cap must be >= 1");
  }

  const double shift = outcome.shift();
  const uint64_t min_count = min_match_count(options.threshold, n_rows);
  const ItemDictionary& dictionary = dataset.dictionary();

  // Per-row weights and the global accumulator.
  std::vector<Accumulator> weights(n_rows);
  Accumulator global;
  for (size_t r = 0; r < n_rows; ++r) {
    weights[r].matches = 1;
    if (const auto& v = outcome.values()[r]) weights[r].outcome.add(*v - shift);
    global.add(weights[r]);
  }

  // Frequent items, most frequent first.
  std::vector<uint64_t> item_counts(dictionary.num_items(), 0);
  for (size_t r = 0; r < n_rows; ++r) {
    for (ItemId id : dataset.row(r)) ++item_counts[id];
  }
  std::vector<ItemId> rank_to_item;
  for (ItemId id = 0; id < dictionary.num_items(); ++id) {
    if (item_counts[id] >= min_count && item_counts[id] > 0) rank_to_item.push_back(id);
  }
  std::stable_sort(rank_to_item.begin(), rank_to_item.end(),
                   [&](ItemId a, ItemId b) { return item_counts[a] > item_counts[b]; });
  std::vector<uint32_t> item_to_rank(dictionary.num_items(), kRootRank);
  for (uint32_t r = 0; r < rank_to_item.size(); ++r) item_to_rank[rank_to_item[r]] = r;

  FpTree tree(rank_to_item.size());
  std::vector<uint32_t> path;
  for (size_t r = 0; r < n_rows; ++r) {
    path.clear();
    for (ItemId id : dataset.row(r)) {
      if (item_to_rank[id] != kRootRank) path.push_back(item_to_rank[id]);
    }
    std::sort(path.begin(), path.end());
    tree.insert(path, weights[r]);
  }

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, std::max<size_t>(rank_to_item.size(), 1)));

  std::atomic<uint64_t> emitted{0};
  std::atomic<bool> stop{false};
  std::atomic<size_t> next_rank{0};
  std::vector<Sink> sinks;
  sinks.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) sinks.emplace_back(rank_to_item, emitted, stop, options.max_records);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const Grower grower(min_count);

  auto work = [&](Sink& sink) {
    try {
      std::vector<uint32_t> prefix;
      for (size_t r = next_rank.fetch_add(1); r < rank_to_item.size(); r = next_rank.fetch_add(1)) {
        grower.extend(tree, static_cast<uint32_t>(r), prefix, sink);
      }
    } catch (const CapReached&) {
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop.store(true);
    }
  };

  if (threads == 1) {
    work(sinks[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, std::ref(sinks[t]));
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (stop.load()) {
    throw Error(ErrorCode::kRecordCap,
                "more than " + std::to_string(options.max_records) +
                    " itemsets reach support " + std::to_string(options.threshold) +
                    "; raise the support threshold or the record cap");
  }

  std::vector<ItemsetRecord> records;
  records.reserve(emitted.load() + 1);
  records.push_back(make_record(Itemset{}, global.matches, global.outcome, global.outcome, shift,
                                n_rows, options.baseline));
  for (auto& sink : sinks) {
    for (auto& raw : sink.records) {
      records.push_back(make_record(Itemset(std::move(raw.items)), raw.acc.matches,
                                    raw.acc.outcome, global.outcome, shift, n_rows,
                                    options.baseline));
    }
    sink.records.clear();
    sink.records.shrink_to_fit();
  }
  log().info("mined {} itemsets at support {} ({} rows, {} threads)", records.size(),
              options.threshold, n_rows, threads);

  MiningMetadata metadata;
  metadata.threshold = options.threshold;
  metadata.outcome = options.outcome_description;
  metadata.n_rows = n_rows;
  metadata.dataset_hash = dataset.content_hash();
  metadata.baseline = options.baseline;
  return MiningResult(dataset.shared_dictionary(), std::move(records), std::move(metadata));
}

std::vector<const ItemsetRecord*> top_k_records(const MiningResult& result, size_t k, Sign sign) {
  std::vector<const ItemsetRecord*> candidates;
  for (const auto& record : result.records()) {
    if (record.itemset.empty() || std::isnan(record.divergence)) continue;
    candidates.push_back(&record);
  }
  auto key = [sign](const ItemsetRecord* r) {
    switch (sign) {
      case Sign::kPositive: return r->divergence;
      case Sign::kNegative: return -r->divergence;
      case Sign::kAbsolute: return std::abs(r->divergence);
    }
    return r->divergence;
  };
  auto better = [&](const ItemsetRecord* a, const ItemsetRecord* b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka > kb;
    if (a->match_count != b->match_count) return a->match_count > b->match_count;
    return canonical_less(a->itemset, b->itemset);
  };
  k = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), better);
  candidates.resize(k);
  return candidates;
}

}  // namespace divminer
