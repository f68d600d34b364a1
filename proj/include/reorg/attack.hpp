#pragma once

#include <cstdint>

#include "reorg/protocol.hpp"
#include "reorg/state.hpp"

namespace reorg {

struct AttackEvaluation {
    std::int64_t attacker_time = 0;  // delta_a, seconds
    std::int64_t honest_time = 0;    // delta_h, seconds
    bool feasible = false;           // attacker_time <= honest_time
    xtz7 honest_reward = 0;          // phi_h: attacker's reward playing honestly
    xtz7 attack_reward = 0;          // phi_a: attacker's reward executing the fork
    xtz7 cost = 0;                   // honest_reward - attack_reward
    bool profitable_selfish = false; // feasible and attack_reward > honest_reward
};

// Time for the attacker to build all fork blocks. The first fork block
// carries all 32 endorsements of the fork point; block i >= 2 carries only
// the attacker's own endorsements for the previous slot.
std::int64_t attacker_time(const ProtocolParams& p, const AttackState& s);

// Time for the honest network to build the same number of blocks while the
// attacker withholds its endorsements.
std::int64_t honest_time(const ProtocolParams& p, const AttackState& s);

bool is_feasible(const ProtocolParams& p, const AttackState& s);

xtz7 honest_reward(const ProtocolParams& p, const AttackState& s);
xtz7 attack_reward(const ProtocolParams& p, const AttackState& s);

AttackEvaluation evaluate(const ProtocolParams& p, const AttackState& s);

}  // namespace reorg
