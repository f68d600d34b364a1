#include "reorg/attack.hpp"

#include <stdexcept>

namespace reorg {

namespace {
void require_nonempty(const AttackState& s) {
    if (s.slots.empty()) throw std::invalid_argument("attack state has no slots");
}
}  // namespace

std::int64_t attacker_time(const ProtocolParams& p, const AttackState& s) {
    require_nonempty(s);
    std::int64_t t = delay(p, s.slots[0].attacker_priority, ProtocolParams::kEndorsersPerBlock);
    for (std::size_t i = 1; i < s.slots.size(); ++i)
        t += delay(p, s.slots[i].attacker_priority, s.slots[i].endorsements);
    return t;
}

std::int64_t honest_time(const ProtocolParams& p, const AttackState& s) {
    require_nonempty(s);
    std::int64_t t = 0;
    for (const auto& slot : s.slots)
        t += delay(p, slot.honest_priority,
                   ProtocolParams::kEndorsersPerBlock - slot.endorsements);
    return t;
}

bool is_feasible(const ProtocolParams& p, const AttackState& s) {
    return attacker_time(p, s) <= honest_time(p, s);  // ties count as feasible
}

xtz7 honest_reward(const ProtocolParams& p, const AttackState& s) {
    require_nonempty(s);
    xtz7 r = 0;
    for (const auto& slot : s.slots) {
        if (slot.attacker_priority == 0)
            r += baker_reward(p, 0, ProtocolParams::kEndorsersPerBlock);
        r += slot.endorsements * endorser_reward(p, 0);
    }
    return r;
}

xtz7 attack_reward(const ProtocolParams& p, const AttackState& s) {
    require_nonempty(s);
    const auto& first = s.slots[0];
    xtz7 r = baker_reward(p, first.attacker_priority, ProtocolParams::kEndorsersPerBlock) +
             first.endorsements * endorser_reward(p, first.attacker_priority);
    for (std::size_t i = 1; i < s.slots.size(); ++i) {
        const auto& slot = s.slots[i];
        r += baker_reward(p, slot.attacker_priority, slot.endorsements) +
             slot.endorsements * endorser_reward(p, slot.attacker_priority);
    }
    return r;
}

AttackEvaluation evaluate(const ProtocolParams& p, const AttackState& s) {
    AttackEvaluation ev;
    ev.attacker_time = attacker_time(p, s);
    ev.honest_time = honest_time(p, s);
    ev.feasible = ev.attacker_time <= ev.honest_time;
    ev.honest_reward = honest_reward(p, s);
    ev.attack_reward = attack_reward(p, s);
    ev.cost = ev.honest_reward - ev.attack_reward;
    ev.profitable_selfish = ev.feasible && ev.attack_reward > ev.honest_reward;
    return ev;
}

}  // namespace reorg
