#pragma once

// Shared driver for the greedy best-first subset search used by both the
// counterfactual search and the occlusion baseline.

#include <algorithm>
#include <exception>
#include <set>
#include <thread>
#include <vector>

#include "cfex/search.hpp"

namespace cfex::detail {

template <class Evaluate>
std::vector<std::vector<Explanation>> evaluate_all(std::vector<Candidate>& batch, Evaluate& evaluate, int threads) {
  std::vector<std::vector<Explanation>> results(batch.size());
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), batch.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) results[i] = evaluate(batch[i]);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < batch.size(); i += workers) results[i] = evaluate(batch[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// `evaluate(Candidate&)` returns the explanations whose domain is exactly
/// the candidate and records its best observed score.
template <class Evaluate>
std::vector<Explanation> best_first_search(const TokenizedProgram& program, const SearchConfig& config,
                                           Evaluate&& evaluate, bool parallel_ok) {
  config.validate();
  const int threads = parallel_ok ? config.threads : 1;
  const std::size_t cap = static_cast<std::size_t>(config.max_explanation_size);

  std::vector<Explanation> explanations;
  std::set<int> explained;  // groups already in some explanation's domain
  std::set<std::vector<int>> tested;
  std::vector<Candidate> explore;

  for (int round = 0; round <= config.max_iterations; ++round) {
    std::vector<int> base;
    if (round > 0) {
      bool found = false;
      while (!explore.empty()) {
        Candidate best = choose(explore);
        bool stale = std::any_of(best.group_ids.begin(), best.group_ids.end(),
                                 [&](int g) { return explained.count(g) > 0; });
        if (!stale) {
          base = std::move(best.group_ids);
          found = true;
          break;
        }
      }
      if (!found) break;
    }

    std::vector<Candidate> batch;
    for (const ConsistencyGroup& g : program.groups()) {
      if (explained.count(g.group_id) || std::binary_search(base.begin(), base.end(), g.group_id)) continue;
      Candidate c;
      c.group_ids = base;
      c.group_ids.insert(std::upper_bound(c.group_ids.begin(), c.group_ids.end(), g.group_id), g.group_id);
      if (!tested.insert(c.group_ids).second) continue;
      batch.push_back(std::move(c));
    }

    auto results = evaluate_all(batch, evaluate, threads);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!results[i].empty()) {
        explained.insert(batch[i].group_ids.begin(), batch[i].group_ids.end());
        for (auto& e : results[i]) explanations.push_back(std::move(e));
      } else if (batch[i].group_ids.size() < cap) {
        explore.push_back(std::move(batch[i]));
      }
    }
    if (config.stop_after && explanations.size() >= static_cast<std::size_t>(*config.stop_after)) {
      explanations.resize(static_cast<std::size_t>(*config.stop_after));
      break;
    }
  }
  return explanations;
}

}  // namespace cfex::detail
