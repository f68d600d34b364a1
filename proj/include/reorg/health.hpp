#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "reorg/protocol.hpp"

namespace reorg {

// One published block: the priority it was baked with and the number of
// endorsements (for the previous slot) it includes.
struct ChainRecord {
    std::int64_t slot = 0;
    int priority = 0;
    int endorsements = 0;
};

struct ChainHistory {
    std::vector<ChainRecord> records;  // strictly consecutive slots, ascending
    int window = 40;                   // omega, the security window

    void validate() const;
};

class InsufficientHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AttackEvent {
    std::int64_t executed_at = 0;  // slot at which the fork became canonical
    int fork_length = 0;           // fork blocks; fork_length - 1 honest blocks deleted
};

// Minimum time the honest network needed for the last k blocks, from on-chain
// priorities and endorsement counts.
std::int64_t honest_backward_time(const ProtocolParams& p, const ChainHistory& hist, int k);

// Minimum time a hypothetical attacker would have needed for the same k
// blocks: the unused top priority (0 if the published block was baked above
// priority 0, else 1) and the endorsements missing from the chain; the first
// fork block carries all 32.
std::int64_t attacker_backward_time(const ProtocolParams& p, const ChainHistory& hist, int k);

// min over k < min(window, length) of (attacker - honest)/k, floored at 0.
// Seconds per block; 40 is the ceiling under default parameters.
double health(const ProtocolParams& p, const ChainHistory& hist);

struct BaselineStats {
    double priority0_fraction = 0.0;
    double endorsement_mean = 0.0;
    double endorsement_stddev = 0.0;
};

BaselineStats baseline_statistics(const ChainHistory& hist);

struct SimulateConfig {
    double alpha = 0.0;       // attacker stake; 0 disables the attacker
    std::uint64_t seed = 1;
    std::int64_t blocks = 0;  // number of published blocks to simulate
    int min_attack = 2;       // smallest fork the attacker will execute (blocks)
    int max_attack = 39;      // largest fork considered; scan runs longest-first
    int window = 40;

    void validate() const;
};

struct SimulationResult {
    ChainHistory chain;                 // final canonical chain
    std::vector<AttackEvent> events;
    std::vector<double> health_trace;   // per published block; NaN before warm-up
};

// Slot-synchronous chain with an embedded attacker that has global
// predictability: at every head it scans fork lengths longest-first and
// commits to the first feasible one. During an attack the honest chain
// publishes with the attacker's priorities and endorsements withheld; on
// completion the fork replaces the n-1 honest blocks. Health is recomputed
// after every published block. Deterministic per seed.
SimulationResult simulate_chain(const ProtocolParams& params, const SimulateConfig& cfg);

// Line-delimited JSON chain records: {"slot": s, "priority": p, "endorsements": e}.
ChainHistory read_chain_jsonl(std::istream& in, int window);
ChainHistory read_chain_file(const std::string& path, int window);
void write_chain_jsonl(const ChainHistory& hist, std::ostream& out);

}  // namespace reorg
