#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "specdec/draft.hpp"
#include "specdec/verify.hpp"

namespace specdec {

// Window value meaning "consult the whole history".
inline constexpr std::size_t kWindowAll = std::numeric_limits<std::size_t>::max();

// One realized-trajectory position: the target's distribution, every
// source's distribution, and the token that actually entered the output.
struct HistoryEntry {
  int position = 0;
  Distribution target_dist;
  std::vector<Distribution> source_dists;
  TokenId realized_token = 0;
};

// Append-only record of past positions. The window is applied when reading:
// recent() yields at most the last `window` entries, and weight selection
// only ever looks at recent(). Entries are never trimmed, so the same cache
// can be replayed under different windows.
class HistoryCache {
 public:
  explicit HistoryCache(int num_sources, std::size_t window = kWindowAll);

  int num_sources() const { return num_sources_; }
  std::size_t window() const { return window_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<HistoryEntry>& entries() const { return entries_; }

  // Positions must be strictly increasing; the entry must carry exactly
  // num_sources source distributions.
  void push(HistoryEntry entry);

  // The last min(window, size) entries, oldest first.
  std::span<const HistoryEntry> recent() const;

 private:
  int num_sources_;
  std::size_t window_;
  std::vector<HistoryEntry> entries_;
};

// Record one verified block into the cache: one entry per emitted position
// that has drafting distributions, i.e. the accepted prefix plus the
// rejection position. The bonus position after a fully accepted block has
// no source distributions and is skipped.
void update_history(HistoryCache& cache, const DraftBlock& block,
                    const VerificationResult& vr, int block_start_position);

}  // namespace specdec
