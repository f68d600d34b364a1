#include "reorg/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace reorg {

double xtz_to_double(xtz7 v) { return static_cast<double>(v) / kXtz7Scale; }

std::string format_xtz(xtz7 v) {
    char buf[64];
    bool neg = v < 0;
    std::uint64_t a = neg ? -static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    std::snprintf(buf, sizeof(buf), "%s%llu.%07llu", neg ? "-" : "",
                  static_cast<unsigned long long>(a / kXtz7Scale),
                  static_cast<unsigned long long>(a % kXtz7Scale));
    return buf;
}

void ProtocolParams::validate() const {
    if (initial_endorsers < 0 || initial_endorsers > kEndorsersPerBlock)
        throw std::invalid_argument("initial_endorsers must be in [0, 32]");
    if (delay_endorse < 0) throw std::invalid_argument("delay_endorse must be >= 0");
    if (delay_priority < 0) throw std::invalid_argument("delay_priority must be >= 0");
}

ProtocolParams parse_params(const std::string& spec) {
    ProtocolParams p;
    int ei = 0, de = 0, dp = 0;
    char trailing = 0;
    if (std::sscanf(spec.c_str(), "%d,%d,%d%c", &ei, &de, &dp, &trailing) != 3)
        throw std::invalid_argument("--params expects EI,DE,DP (three comma-separated integers)");
    p.initial_endorsers = ei;
    p.delay_endorse = de;
    p.delay_priority = dp;
    p.validate();
    return p;
}

namespace {
void check_domain(const ProtocolParams& p, std::int64_t priority, int endorsements) {
    if (priority < 0) throw std::invalid_argument("priority must be >= 0");
    if (endorsements < 0 || endorsements > p.kEndorsersPerBlock)
        throw std::invalid_argument("endorsement count must be in [0, 32]");
}
}  // namespace

std::int64_t delay(const ProtocolParams& p, std::int64_t priority, int endorsements) {
    check_domain(p, priority, endorsements);
    const std::int64_t missing = std::max(p.initial_endorsers - endorsements, 0);
    return ProtocolParams::kBaseDelay + p.delay_priority * priority + p.delay_endorse * missing;
}

xtz7 baker_reward(const ProtocolParams& p, std::int64_t priority, int endorsements) {
    check_domain(p, priority, endorsements);
    const xtz7 per = priority == 0 ? ProtocolParams::kBakerRewardTop : ProtocolParams::kBakerRewardLow;
    return per * endorsements;
}

xtz7 endorser_reward(const ProtocolParams& p, std::int64_t including_priority) {
    if (including_priority < 0) throw std::invalid_argument("priority must be >= 0");
    (void)p;
    return including_priority == 0 ? ProtocolParams::kEndorserRewardTop
                                   : ProtocolParams::kEndorserRewardLow;
}

}  // namespace reorg
