#pragma once

#include <cstdint>
#include <string>

namespace reorg {

// Money is held in fixed-point units of 1e-7 XTZ so reward sums and cost
// differences are exact integers.
using xtz7 = std::int64_t;
inline constexpr xtz7 kXtz7Scale = 10'000'000;

double xtz_to_double(xtz7 v);
std::string format_xtz(xtz7 v);

// The tunable design tuple (initial_endorsers, delay_endorse, delay_priority)
// plus the fixed Carthage constants. The default instance is the mainnet
// parameterization (24, 8, 40).
struct ProtocolParams {
    int initial_endorsers = 24;  // endorsements required to avoid a delay penalty
    int delay_endorse = 8;       // seconds per endorsement short of initial_endorsers
    int delay_priority = 40;     // seconds per priority step below 0

    static constexpr int kBaseDelay = 60;
    static constexpr int kEndorsersPerBlock = 32;
    static constexpr xtz7 kBakerRewardTop = 12'500'000;     // 1.25 XTZ per endorsement at priority 0
    static constexpr xtz7 kBakerRewardLow = 1'875'000;      // 0.1875 XTZ per endorsement otherwise
    static constexpr xtz7 kEndorserRewardTop = 12'500'000;  // 1.25 XTZ when included at priority 0
    static constexpr xtz7 kEndorserRewardLow = 8'333'333;   // 0.8333333 XTZ otherwise

    void validate() const;  // throws std::invalid_argument
};

// Parses "EI,DE,DP" as used by the --params CLI flag.
ProtocolParams parse_params(const std::string& spec);

// Minimum time in seconds between a block baked at `priority` including
// `endorsements` endorsements and its predecessor. Exact integer arithmetic.
std::int64_t delay(const ProtocolParams& p, std::int64_t priority, int endorsements);

// Block reward for the baker, per included endorsement.
xtz7 baker_reward(const ProtocolParams& p, std::int64_t priority, int endorsements);

// Reward for one endorsement included in a block of priority `including_priority`.
xtz7 endorser_reward(const ProtocolParams& p, std::int64_t including_priority);

}  // namespace reorg
