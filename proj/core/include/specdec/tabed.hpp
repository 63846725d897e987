#pragma once

#include <vector>

#include "specdec/history.hpp"
#include "specdec/records.hpp"
#include "specdec/session.hpp"
#include "specdec/weights.hpp"

namespace specdec {

// Knobs for test-time adaptive ensemble drafting.
struct TabedOptions {
  WeightPolicy policy = WeightPolicy::grid(10);
  SelectionCriterion criterion = SelectionCriterion::kSoftKl;
  std::size_t window = kWindowAll;  // history entries consulted per selection
};

// Draft one block from the weighted ensemble of sources. Weights are
// selected from the cache once, then held fixed for all gamma steps; every
// source conditions on its own transformed view extended by the shared
// drafted prefix. Per-source distributions are recorded so the cache can be
// updated after verification.
DraftBlock tabed_draft(const std::vector<DraftSource>& sources, const Context& ctx,
                       int gamma, const HistoryCache& cache, const WeightPolicy& policy,
                       SelectionCriterion criterion, DecodeMode mode, Rng& rng);

// Full decode loop with adaptive ensemble drafting: select weights, draft,
// verify, record the realized positions into the history cache, repeat.
// Block weights land in the run records, one row per block.
DecodeResult tabed_session(const SequenceModel& target,
                           const std::vector<DraftSource>& sources, const Context& ctx,
                           const DecodeConfig& cfg, const TabedOptions& opts);

}  // namespace specdec
