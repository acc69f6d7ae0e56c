#include "divref/metrics/meteor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "divref/error.hpp"
#include "divref/metrics/porter.hpp"

namespace divref::metrics {
namespace {

struct Candidate {
  int ref_pos;
  bool exact;
};

// Branch and bound over hypothesis positions. The objective packs
// (exact, matches, continuations) lexicographically into one integer, where
// a continuation is a match (i, j) whose predecessor (i-1, j-1) is also
// matched; chunks = matches - continuations.
class AlignmentSearch {
 public:
  AlignmentSearch(std::vector<std::vector<Candidate>> candidates, std::size_t ref_len, std::size_t budget)
      : cands_(std::move(candidates)),
        n_(cands_.size()),
        weight_(static_cast<std::int64_t>(n_) + 1),
        used_(ref_len, 0),
        budget_(budget) {
    can_continue_.assign(n_, 0);
    for (std::size_t i = 1; i < n_; ++i) {
      for (const auto& c : cands_[i]) {
        const bool linked = std::any_of(cands_[i - 1].begin(), cands_[i - 1].end(),
                                        [&](const Candidate& p) { return p.ref_pos == c.ref_pos - 1; });
        if (linked) {
          can_continue_[i] = 1;
          break;
        }
      }
    }
    // Optimistic gain of positions i..n-1, ignoring conflicts.
    suffix_bound_.assign(n_ + 1, 0);
    for (std::size_t i = n_; i-- > 0;) {
      std::int64_t gain = 0;
      for (const auto& c : cands_[i]) gain = std::max(gain, value_of(c.exact, false));
      if (gain > 0 && can_continue_[i]) gain += 1;
      suffix_bound_[i] = suffix_bound_[i + 1] + gain;
    }
  }

  MeteorAlignment run() {
    greedy();
    dfs(0, -1, 0);
    MeteorAlignment out;
    out.exact_matches = static_cast<std::size_t>(best_ / (weight_ * weight_));
    out.matches = static_cast<std::size_t>((best_ / weight_) % weight_);
    const auto continuations = static_cast<std::size_t>(best_ % weight_);
    out.chunks = out.matches - continuations;
    out.exhaustive = nodes_ <= budget_;
    return out;
  }

 private:
  std::int64_t value_of(bool exact, bool continues) const {
    return (exact ? weight_ * weight_ : 0) + weight_ + (continues ? 1 : 0);
  }

  void greedy() {
    std::vector<char> used(used_.size(), 0);
    int prev = -1;
    std::int64_t value = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const Candidate* pick = nullptr;
      for (const auto& c : cands_[i]) {
        if (used[static_cast<std::size_t>(c.ref_pos)]) continue;
        if (prev >= 0 && c.ref_pos == prev + 1 && (pick == nullptr || c.exact >= pick->exact)) {
          pick = &c;
          if (c.exact) break;
        } else if (pick == nullptr || (c.exact && !pick->exact)) {
          pick = &c;
        }
      }
      if (pick == nullptr) {
        prev = -1;
        continue;
      }
      used[static_cast<std::size_t>(pick->ref_pos)] = 1;
      value += value_of(pick->exact, prev >= 0 && pick->ref_pos == prev + 1);
      prev = pick->ref_pos;
    }
    best_ = value;
  }

  void dfs(std::size_t i, int prev, std::int64_t value) {
    if (++nodes_ > budget_) return;
    if (i == n_) {
      best_ = std::max(best_, value);
      return;
    }
    if (value + suffix_bound_[i] <= best_) return;
    // Continuation first, then exact, then stem-only, then leave unmatched.
    if (prev >= 0) {
      for (const auto& c : cands_[i]) {
        if (c.ref_pos == prev + 1 && !used_[static_cast<std::size_t>(c.ref_pos)]) {
          take(i, c, true, value);
          break;
        }
      }
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : cands_[i]) {
        if (c.exact != (pass == 0)) continue;
        if (prev >= 0 && c.ref_pos == prev + 1) continue;
        if (used_[static_cast<std::size_t>(c.ref_pos)]) continue;
        take(i, c, false, value);
      }
    }
    dfs(i + 1, -1, value);
  }

  void take(std::size_t i, const Candidate& c, bool continues, std::int64_t value) {
    used_[static_cast<std::size_t>(c.ref_pos)] = 1;
    dfs(i + 1, c.ref_pos, value + value_of(c.exact, continues));
    used_[static_cast<std::size_t>(c.ref_pos)] = 0;
  }

  std::vector<std::vector<Candidate>> cands_;
  std::size_t n_;
  std::int64_t weight_;
  std::vector<char> used_;
  std::vector<char> can_continue_;
  std::vector<std::int64_t> suffix_bound_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::int64_t best_ = 0;
};

}  // namespace

MeteorAlignment meteor_align(std::span<const std::string> hyp, std::span<const std::string> ref,
                             std::size_t search_budget) {
  std::vector<std::string> hyp_stems;
  std::vector<std::string> ref_stems;
  hyp_stems.reserve(hyp.size());
  ref_stems.reserve(ref.size());
  for (const auto& w : hyp) hyp_stems.push_back(porter_stem(w));
  for (const auto& w : ref) ref_stems.push_back(porter_stem(w));
  std::vector<std::vector<Candidate>> cands(hyp.size());
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (hyp[i] == ref[j]) {
        cands[i].push_back({static_cast<int>(j), true});
      } else if (hyp_stems[i] == ref_stems[j]) {
        cands[i].push_back({static_cast<int>(j), false});
      }
    }
  }
  return AlignmentSearch(std::move(cands), ref.size(), search_budget).run();
}

double meteor_from_alignment(const MeteorAlignment& a, std::size_t hyp_len, std::size_t ref_len,
                             const MeteorParams& params) {
  if (a.matches == 0 || hyp_len == 0 || ref_len == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double precision = m / static_cast<double>(hyp_len);
  const double recall = m / static_cast<double>(ref_len);
  const double fmean = precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
  const double penalty = params.gamma * std::pow(static_cast<double>(a.chunks) / m, params.beta);
  return fmean * (1.0 - penalty);
}

MetricScore meteor(std::string_view hypothesis, std::span<const std::string> references, const MeteorParams& params) {
  if (references.empty()) throw UsageError("METEOR requires at least one reference");
  const auto hyp = tokenize(hypothesis, params.tokenizer);
  MetricScore score;
  score.metric_id = MetricId::meteor;
  for (const auto& r : references) {
    const auto ref = tokenize(r, params.tokenizer);
    const auto alignment = meteor_align(hyp, ref, params.search_budget);
    score.per_reference.push_back(meteor_from_alignment(alignment, hyp.size(), ref.size(), params));
  }
  score.value = *std::max_element(score.per_reference.begin(), score.per_reference.end());
  score.aggregation_used = references.size() == 1 ? Aggregation::single : Aggregation::max;
  return score;
}

}  // namespace divref::metrics
