#pragma once

#include <string>
#include <vector>

#include "specdec/records.hpp"

namespace specdec {

// Mean tokens produced per draft/verify block (accepted + the corrected or
// bonus token); lies in [1, gamma+1].
double block_efficiency(const RunRecords& records);

// Pooled over every block of every run (not a mean of per-run means).
double block_efficiency(const std::vector<RunRecords>& runs);

// Analytic latency model: the draft-to-target per-token cost ratio, plus
// the three assumptions the speedup formula leans on (drafting cost roughly
// constant in block length, sequence length and batch size). The flags are
// documentation of applicability — nothing computes with them.
struct LatencyModel {
  double ratio = 0.1;  // T_draft / T_target per token
  bool constant_in_block_length = true;
  bool constant_in_seq_length = true;
  bool constant_in_batch_size = true;

  static LatencyModel from_ratio(double ratio);
  // Measured pairings of well-known model sizes, e.g. ("7B", "68M") -> 0.063.
  static LatencyModel preset(const std::string& target_size,
                             const std::string& draft_size);
};

// Modeled wall-time speedup of speculative decoding over plain target
// decoding: tau / (gamma * ratio + 1). Valid for tau in [1, gamma+1].
double expected_speedup(double tau, int gamma, const LatencyModel& latency);

}  // namespace specdec
