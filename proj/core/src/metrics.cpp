#include "specdec/metrics.hpp"

#include "specdec/errors.hpp"

namespace specdec {

double block_efficiency(const RunRecords& records) {
  if (records.blocks.empty()) throw EmptyRun("block_efficiency: no blocks recorded");
  double acc = 0.0;
  for (const BlockRecord& b : records.blocks) acc += b.accepted_count + 1;
  return acc / static_cast<double>(records.blocks.size());
}

double block_efficiency(const std::vector<RunRecords>& runs) {
  double acc = 0.0;
  std::size_t blocks = 0;
  for (const RunRecords& r : runs) {
    for (const BlockRecord& b : r.blocks) acc += b.accepted_count + 1;
    blocks += r.blocks.size();
  }
  if (blocks == 0) throw EmptyRun("block_efficiency: no blocks recorded");
  return acc / static_cast<double>(blocks);
}

LatencyModel LatencyModel::from_ratio(double ratio) {
  if (!(ratio > 0.0)) throw BadParams("LatencyModel: ratio must be > 0");
  LatencyModel m;
  m.ratio = ratio;
  return m;
}

LatencyModel LatencyModel::preset(const std::string& target_size,
                                  const std::string& draft_size) {
  // Measured draft/target per-token cost ratios for the usual pairings.
  if (target_size == "7B" && draft_size == "68M") return from_ratio(0.063);
  if (target_size == "7B" && draft_size == "160M") return from_ratio(0.206);
  if (target_size == "13B" && draft_size == "68M") return from_ratio(0.042);
  if (target_size == "13B" && draft_size == "160M") return from_ratio(0.137);
  throw BadParams("LatencyModel::preset: unknown pairing (" + target_size + ", " +
                  draft_size + ")");
}

double expected_speedup(double tau, int gamma, const LatencyModel& latency) {
  if (gamma < 1) throw BadParams("expected_speedup: gamma must be >= 1");
  if (!(latency.ratio > 0.0)) throw BadParams("expected_speedup: ratio must be > 0");
  if (tau < 1.0 || tau > static_cast<double>(gamma) + 1.0) {
    throw DomainError("expected_speedup: tau " + std::to_string(tau) +
                      " outside [1, gamma+1]");
  }
  return tau / (gamma * latency.ratio + 1.0);
}

}  // namespace specdec
