#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace divref::metrics {

// Interns strings to dense ids.
class Vocabulary {
 public:
  std::uint32_t id(const std::string& token);
  std::vector<std::uint32_t> ids(std::span<const std::string> tokens);
  std::size_t size() const noexcept { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Per-order n-gram ids of one sequence: ids[k-1][i] is the id of the k-gram
// starting at position i.
struct IndexedSequence {
  std::vector<std::vector<std::uint32_t>> ids;
  std::size_t length = 0;

  std::span<const std::uint32_t> order(int k) const { return ids[static_cast<std::size_t>(k - 1)]; }
};

// Assigns dense ids to every n-gram of orders 1..max_order across all the
// sequences indexed by one instance, so count vectors from different
// sequences line up position by position. A k-gram's id is derived from its
// (k-1)-prefix id and last symbol, which keeps ids exact for any order and
// alphabet size.
class NGramIndexer {
 public:
  explicit NGramIndexer(int max_order);

  IndexedSequence index(std::span<const std::uint32_t> symbols);
  std::size_t distinct(int order) const { return tables_[static_cast<std::size_t>(order - 1)].size(); }
  int max_order() const noexcept { return max_order_; }

 private:
  int max_order_;
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> tables_;
};

// Multiset of order-k n-grams as a dense count vector over an indexer's ids.
// Invariant: total == max(0, length - order + 1) == sum(counts).
struct NGramProfile {
  int order = 1;
  std::vector<std::uint32_t> counts;
  std::uint64_t total = 0;
};

// `width` must be >= indexer.distinct(order) at the time of the call so that
// profiles built from the same indexer are comparable.
NGramProfile make_profile(const IndexedSequence& seq, int order, std::size_t width);

// sum over n-grams of min(hyp count, ref count).
std::uint64_t clipped_matches(const NGramProfile& hyp, const NGramProfile& ref);

// Element-wise maximum of reference counts (multi-reference clipping).
NGramProfile max_profile(std::span<const NGramProfile> refs);

}  // namespace divref::metrics
