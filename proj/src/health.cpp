#include "reorg/health.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "reorg/rng.hpp"
#include "reorg/state.hpp"

namespace reorg {

namespace {
constexpr int kAll = ProtocolParams::kEndorsersPerBlock;

// Potential fork priority: 0 if the published block left priority 0 unused,
// else 1.
int potential_priority(int published_priority) { return published_priority != 0 ? 0 : 1; }

void check_record(const ChainRecord& r) {
    if (r.priority < 0 || r.endorsements < 0 || r.endorsements > kAll)
        throw std::invalid_argument("chain record out of range");
}

void check_depth(const ChainHistory& hist, int k) {
    const auto len = static_cast<std::int64_t>(hist.records.size());
    if (k < 1 || k >= std::min<std::int64_t>(hist.window, len))
        throw InsufficientHistory("depth k must satisfy 1 <= k < min(window, history length)");
}
}  // namespace

void ChainHistory::validate() const {
    if (window < 2) throw std::invalid_argument("window must be >= 2");
    if (records.empty()) throw std::invalid_argument("chain history is empty");
    for (std::size_t i = 0; i < records.size(); ++i) {
        check_record(records[i]);
        if (i > 0 && records[i].slot != records[i - 1].slot + 1)
            throw std::invalid_argument("chain slots must be strictly consecutive");
    }
}

std::int64_t honest_backward_time(const ProtocolParams& p, const ChainHistory& hist, int k) {
    check_depth(hist, k);
    const auto& rec = hist.records;
    std::int64_t t = 0;
    for (int j = 0; j < k; ++j) {
        const auto& r = rec[rec.size() - 1 - static_cast<std::size_t>(j)];
        t += delay(p, r.priority, r.endorsements);
    }
    return t;
}

std::int64_t attacker_backward_time(const ProtocolParams& p, const ChainHistory& hist, int k) {
    check_depth(hist, k);
    const auto& rec = hist.records;
    const auto& first = rec[rec.size() - static_cast<std::size_t>(k)];
    std::int64_t t = delay(p, potential_priority(first.priority), kAll);
    for (int j = 0; j < k - 1; ++j) {
        const auto& r = rec[rec.size() - 1 - static_cast<std::size_t>(j)];
        t += delay(p, potential_priority(r.priority), kAll - r.endorsements);
    }
    return t;
}

namespace {

// health() over the trailing window, shared with the simulator's incremental
// trace. Walks k = 1..kmax accumulating both sums in one pass.
double health_tail(const ProtocolParams& p, const std::vector<ChainRecord>& rec, int window) {
    const auto len = static_cast<std::int64_t>(rec.size());
    if (len < 2) throw InsufficientHistory("health needs at least 2 records");
    const int kmax = static_cast<int>(std::min<std::int64_t>(window, len) - 1);
    double best = std::numeric_limits<double>::infinity();
    std::int64_t honest = 0;
    std::int64_t attacker_rest = 0;  // deeper blocks as non-first fork blocks
    for (int k = 1; k <= kmax; ++k) {
        const auto& r = rec[rec.size() - static_cast<std::size_t>(k)];
        honest += delay(p, r.priority, r.endorsements);
        const std::int64_t attacker =
            delay(p, potential_priority(r.priority), kAll) + attacker_rest;
        const std::int64_t dk = attacker - honest;
        if (dk <= 0) return 0.0;
        best = std::min(best, static_cast<double>(dk) / k);
        attacker_rest += delay(p, potential_priority(r.priority), kAll - r.endorsements);
    }
    return best;
}

}  // namespace

double health(const ProtocolParams& p, const ChainHistory& hist) {
    hist.validate();
    return health_tail(p, hist.records, hist.window);
}

BaselineStats baseline_statistics(const ChainHistory& hist) {
    hist.validate();
    BaselineStats st;
    double esum = 0.0, esq = 0.0;
    std::int64_t p0 = 0;
    for (const auto& r : hist.records) {
        p0 += r.priority == 0;
        esum += r.endorsements;
        esq += static_cast<double>(r.endorsements) * r.endorsements;
    }
    const double n = static_cast<double>(hist.records.size());
    st.priority0_fraction = static_cast<double>(p0) / n;
    st.endorsement_mean = esum / n;
    st.endorsement_stddev = std::sqrt(std::max(0.0, esq / n - st.endorsement_mean * st.endorsement_mean));
    return st;
}

void SimulateConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must be in [0, 0.5)");
    if (blocks < 1) throw std::invalid_argument("blocks must be >= 1");
    if (min_attack < 2) throw std::invalid_argument("min_attack must be >= 2");
    if (max_attack < min_attack) throw std::invalid_argument("max_attack must be >= min_attack");
    if (max_attack > window) throw std::invalid_argument("max_attack must be <= window");
    if (window < 2) throw std::invalid_argument("window must be >= 2");
}

SimulationResult simulate_chain(const ProtocolParams& params, const SimulateConfig& cfg) {
    params.validate();
    cfg.validate();

    // Slot tuple s (1-based) carries the priorities of slot s and the
    // attacker endorsement rights of slot s-1, so a fork from head t of n
    // blocks reads exactly tuples t+1 .. t+n.
    const std::int64_t total = cfg.blocks + cfg.max_attack + 1;
    std::vector<SlotConfig> tup(static_cast<std::size_t>(total));
    {
        SplitMix64 rng(cfg.seed);
        const SlotSampler sampler(cfg.alpha);
        for (auto& t : tup) t = sampler.sample(rng);
    }
    auto slot_tuple = [&](std::int64_t s) -> const SlotConfig& {
        return tup[static_cast<std::size_t>(s - 1)];
    };

    auto feasible_from = [&](std::int64_t head, int n) {
        std::int64_t da = 0, dh = 0;
        for (int i = 1; i <= n; ++i) {
            const SlotConfig& c = slot_tuple(head + i);
            da += i == 1 ? delay(params, c.attacker_priority, kAll)
                         : delay(params, c.attacker_priority, c.endorsements);
            dh += delay(params, c.honest_priority, kAll - c.endorsements);
        }
        return da <= dh;
    };

    SimulationResult res;
    res.chain.window = cfg.window;
    auto& rec = res.chain.records;
    rec.reserve(static_cast<std::size_t>(cfg.blocks));
    auto publish = [&](std::int64_t slot, int priority, int endorsements) {
        rec.push_back({slot, priority, endorsements});
        res.health_trace.push_back(
            rec.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                           : health_tail(params, rec, cfg.window));
    };

    std::int64_t head = 0;
    while (head < cfg.blocks) {
        int launch = 0;
        if (cfg.alpha > 0.0) {
            for (int n = cfg.max_attack; n >= cfg.min_attack; --n) {
                if (head + n <= cfg.blocks && feasible_from(head, n)) {
                    launch = n;
                    break;
                }
            }
        }
        if (launch == 0) {
            publish(head + 1, 0, kAll);  // honest block, everything included
            ++head;
            continue;
        }
        const std::int64_t fork_point = head;
        // Honest blocks build during the attack, endorsements withheld.
        for (int i = 1; i < launch; ++i) {
            const SlotConfig& c = slot_tuple(fork_point + i);
            publish(fork_point + i, c.honest_priority, kAll - c.endorsements);
        }
        // Completion: the fork replaces the n-1 honest blocks and lands its
        // final block. The trace keeps the values observed while the honest
        // blocks were public; the entry at the execution slot sees the
        // post-reorg chain.
        rec.resize(static_cast<std::size_t>(fork_point));
        for (int i = 1; i <= launch; ++i) {
            const SlotConfig& c = slot_tuple(fork_point + i);
            rec.push_back({fork_point + i, c.attacker_priority,
                           i == 1 ? kAll : c.endorsements});
        }
        res.health_trace.push_back(health_tail(params, rec, cfg.window));
        head = fork_point + launch;
        res.events.push_back({head, launch});
    }
    return res;
}

ChainHistory read_chain_jsonl(std::istream& in, int window) {
    ChainHistory hist;
    hist.window = window;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ChainRecord r;
        long long slot = 0;
        int pr = 0, en = 0;
        if (std::sscanf(line.c_str(), " { \"slot\" : %lld , \"priority\" : %d , \"endorsements\" : %d",
                        &slot, &pr, &en) != 3)
            throw std::invalid_argument("bad chain record line: " + line);
        r.slot = slot;
        r.priority = pr;
        r.endorsements = en;
        hist.records.push_back(r);
    }
    hist.validate();
    return hist;
}

ChainHistory read_chain_file(const std::string& path, int window) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open chain file: " + path);
    return read_chain_jsonl(in, window);
}

void write_chain_jsonl(const ChainHistory& hist, std::ostream& out) {
    for (const auto& r : hist.records)
        out << "{\"slot\": " << r.slot << ", \"priority\": " << r.priority
            << ", \"endorsements\": " << r.endorsements << "}\n";
}

}  // namespace reorg
