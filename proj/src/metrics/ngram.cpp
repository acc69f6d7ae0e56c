#include "divref/metrics/ngram.hpp"

#include <stdexcept>

#include "divref/simd/kernels.hpp"

namespace divref::metrics {

std::uint32_t Vocabulary::id(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<std::uint32_t>(ids_.size()));
  return it->second;
}

std::vector<std::uint32_t> Vocabulary::ids(std::span<const std::string> tokens) {
  std::vector<std::uint32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

NGramIndexer::NGramIndexer(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  tables_.resize(static_cast<std::size_t>(max_order));
}

IndexedSequence NGramIndexer::index(std::span<const std::uint32_t> symbols) {
  IndexedSequence seq;
  seq.length = symbols.size();
  seq.ids.resize(static_cast<std::size_t>(max_order_));
  auto intern = [](std::unordered_map<std::uint64_t, std::uint32_t>& table, std::uint64_t key) {
    auto [it, inserted] = table.try_emplace(key, static_cast<std::uint32_t>(table.size()));
    return it->second;
  };
  auto& unigrams = seq.ids[0];
  unigrams.reserve(symbols.size());
  for (auto s : symbols) unigrams.push_back(intern(tables_[0], s));
  for (int k = 2; k <= max_order_; ++k) {
    const auto& prev = seq.ids[static_cast<std::size_t>(k - 2)];
    auto& cur = seq.ids[static_cast<std::size_t>(k - 1)];
    if (symbols.size() < static_cast<std::size_t>(k)) break;
    const std::size_t count = symbols.size() - static_cast<std::size_t>(k) + 1;
    cur.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t key = (static_cast<std::uint64_t>(prev[i]) << 32) | unigrams[i + static_cast<std::size_t>(k) - 1];
      cur.push_back(intern(tables_[static_cast<std::size_t>(k - 1)], key));
    }
  }
  return seq;
}

NGramProfile make_profile(const IndexedSequence& seq, int order, std::size_t width) {
  NGramProfile profile;
  profile.order = order;
  profile.counts.assign(width, 0);
  const auto ids = seq.order(order);
  for (auto id : ids) ++profile.counts[id];
  profile.total = ids.size();
  return profile;
}

std::uint64_t clipped_matches(const NGramProfile& hyp, const NGramProfile& ref) {
  return simd::sum_min(hyp.counts, ref.counts);
}

NGramProfile max_profile(std::span<const NGramProfile> refs) {
  if (refs.empty()) throw std::invalid_argument("max_profile: no references");
  NGramProfile out = refs.front();
  for (std::size_t r = 1; r < refs.size(); ++r) {
    if (refs[r].counts.size() > out.counts.size()) out.counts.resize(refs[r].counts.size(), 0);
    simd::max_inplace(out.counts, refs[r].counts);
    out.total = std::max(out.total, refs[r].total);
  }
  return out;
}

}  // namespace divref::metrics
