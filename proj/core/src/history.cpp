#include "specdec/history.hpp"

#include <string>

#include "specdec/errors.hpp"

namespace specdec {

HistoryCache::HistoryCache(int num_sources, std::size_t window)
    : num_sources_(num_sources), window_(window) {
  if (num_sources < 1) throw BadParams("HistoryCache: num_sources must be >= 1");
  if (window == 0) throw BadParams("HistoryCache: window must be >= 1 (or kWindowAll)");
}

void HistoryCache::push(HistoryEntry entry) {
  if (static_cast<int>(entry.source_dists.size()) != num_sources_) {
    throw DimensionMismatch("HistoryCache::push: entry has " +
                            std::to_string(entry.source_dists.size()) +
                            " source dists, cache expects " +
                            std::to_string(num_sources_));
  }
  if (!entries_.empty() && entry.position <= entries_.back().position) {
    throw BadParams("HistoryCache::push: positions must strictly increase (" +
                    std::to_string(entry.position) + " after " +
                    std::to_string(entries_.back().position) + ")");
  }
  entries_.push_back(std::move(entry));
}

std::span<const HistoryEntry> HistoryCache::recent() const {
  const std::size_t n = entries_.size() < window_ ? entries_.size() : window_;
  return {entries_.data() + (entries_.size() - n), n};
}

void update_history(HistoryCache& cache, const DraftBlock& block,
                    const VerificationResult& vr, int block_start_position) {
  if (vr.accepted_count < 0 || vr.accepted_count > block.gamma()) {
    throw InconsistentPair("update_history: accepted_count outside [0, gamma]");
  }
  if (static_cast<int>(vr.emitted_tokens.size()) != vr.accepted_count + 1 ||
      vr.target_dists.size() != vr.emitted_tokens.size()) {
    throw InconsistentPair("update_history: verification lengths disagree");
  }
  if (block.num_sources() != cache.num_sources()) {
    throw DimensionMismatch("update_history: block has " +
                            std::to_string(block.num_sources()) +
                            " sources, cache expects " +
                            std::to_string(cache.num_sources()));
  }
  // Positions with drafting distributions: all gamma drafted slots cover the
  // accepted prefix plus (when accepted_count < gamma) the rejection slot.
  // A fully accepted block contributes only its gamma drafted positions; the
  // bonus token has no q and is excluded.
  const int realized = vr.accepted_count < block.gamma()
                           ? vr.accepted_count + 1
                           : vr.accepted_count;
  for (int t = 0; t < realized; ++t) {
    std::vector<Distribution> source_dists;
    source_dists.reserve(block.per_source_dists.size());
    for (const auto& row : block.per_source_dists) {
      source_dists.push_back(row[static_cast<std::size_t>(t)]);
    }
    cache.push(HistoryEntry{block_start_position + t,
                            vr.target_dists[static_cast<std::size_t>(t)],
                            std::move(source_dists),
                            vr.emitted_tokens[static_cast<std::size_t>(t)]});
  }
}

}  // namespace specdec
