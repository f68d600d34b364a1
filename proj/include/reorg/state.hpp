#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "reorg/rng.hpp"

namespace reorg {

// Priority stand-in for "the attacker owns no stake": large enough that no
// attack is ever feasible, small enough that delay sums stay far from overflow.
inline constexpr int kUnreachablePriority = 1'000'000;

// One slot of an attack state. `endorsements` is the attacker-owned
// endorsement count for the slot *preceding* the paired priorities, which is
// the count both withheld from the honest block and usable on the attacker
// fork block at this position.
struct SlotConfig {
    int attacker_priority = 0;  // a: best attacker priority, 0 is best
    int honest_priority = 0;    // h: best honest priority
    int endorsements = 0;       // e: attacker endorsement rights, in [0, 32]
};

// Validating factory; exactly one of (a, h) must be zero. Throws
// std::invalid_argument otherwise.
SlotConfig make_slot_config(int attacker_priority, int honest_priority, int endorsements);

bool slot_config_valid(const SlotConfig& s);

// Forward-looking state of a length-n fork: slot i pairs the priorities of
// fork block i with the endorsement count of the previous slot.
struct AttackState {
    std::vector<SlotConfig> slots;
    int fork_blocks() const { return static_cast<int>(slots.size()); }
};

AttackState make_attack_state(std::vector<SlotConfig> slots);  // validates every slot

struct SamplingConfig {
    double alpha = 0.3;        // attacker stake fraction
    std::uint64_t seed = 1;
    int priority_cap = 152;    // truncation bound for enumeration domains

    void validate() const;     // requires 0 < alpha < 0.5
};

// Per-alpha sampler. Precomputes the Binomial(32, alpha) tables once;
// sampling costs one uniform for h, one for e, and one more for a when
// h == 0. alpha == 0 is supported for the simulator (no stake, no attacks).
class SlotSampler {
public:
    explicit SlotSampler(double alpha);

    double alpha() const { return alpha_; }

    SlotConfig sample(SplitMix64& rng) const;

    // log Pr[slot] under this sampler's alpha; -inf for invalid slots.
    double slot_log_prob(const SlotConfig& s) const;

    double binomial_pmf(int e) const { return pmf_[static_cast<std::size_t>(e)]; }

private:
    double alpha_;
    double log_alpha_;
    double log_1malpha_;
    std::array<double, 33> pmf_{};
    std::array<double, 33> log_pmf_{};
    std::array<double, 33> cdf_{};
};

// n independent slot draws assembled into a state.
AttackState sample_state(const SlotSampler& sampler, int fork_blocks, SplitMix64& rng);

// Pr[slot] under cfg.alpha; 0 for records violating the exclusion invariant.
double slot_probability(const SamplingConfig& cfg, const SlotConfig& s);

// Product of the per-slot probabilities, evaluated in log space.
double state_probability(const SamplingConfig& cfg, const AttackState& state);

}  // namespace reorg
