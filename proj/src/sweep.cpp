#include "reorg/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "reorg/rng.hpp"

namespace reorg {

int GridRange::count() const {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    if (hi < lo) throw std::invalid_argument("grid range is empty");
    return (hi - lo) / step + 1;
}

GridRange parse_grid_range(const std::string& spec) {
    GridRange r;
    char trailing = 0;
    if (std::sscanf(spec.c_str(), "%d:%d:%d%c", &r.lo, &r.hi, &r.step, &trailing) != 3)
        throw std::invalid_argument("grid range expects LO:HI:STEP");
    r.count();
    return r;
}

void SweepGrid::validate() const {
    ei.count();
    de.count();
    dp.count();
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must be in (0, 0.5)");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must be in [0, 1]");
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("n1, n2 must be >= 1");
    if (samples_per_cell == 0) throw std::invalid_argument("samples_per_cell must be >= 1");
}

namespace {

std::uint64_t cell_seed(std::uint64_t master, int ei, int de, int dp) {
    std::uint64_t s = derive_stream_seed(master, static_cast<std::uint64_t>(ei));
    s = derive_stream_seed(s, static_cast<std::uint64_t>(de));
    return derive_stream_seed(s, static_cast<std::uint64_t>(dp));
}

EstimateResult estimate_leg(const SweepGrid& grid, const ProtocolParams& params,
                            std::uint64_t leg_seed, int fork_blocks, Target target) {
    const int length = fork_blocks - 1;
    SamplingConfig cfg;
    cfg.alpha = grid.alpha;
    cfg.seed = leg_seed;
    EstimateResult mc =
        mc_estimate(params, cfg, length, grid.samples_per_cell, target, grid.threads);
    if (mc.hits >= grid.is_hit_threshold) return mc;
    ISConfig is_cfg;
    is_cfg.alpha_q = choose_alpha_q(grid.alpha, length);
    cfg.seed = derive_stream_seed(leg_seed, 0xC0FFEE);
    return is_estimate(params, cfg, is_cfg, length, grid.samples_per_cell, target, grid.threads);
}

}  // namespace

SweepCell run_cell(const SweepGrid& grid, int ei, int de, int dp) {
    SweepCell cell;
    cell.params.initial_endorsers = ei;
    cell.params.delay_endorse = de;
    cell.params.delay_priority = dp;
    const std::uint64_t s = cell_seed(grid.seed, ei, de, dp);
    try {
        cell.params.validate();
        cell.o1 = estimate_leg(grid, cell.params, derive_stream_seed(s, 1), grid.n1,
                               Target::feasible);
        cell.o2 = estimate_leg(grid, cell.params, derive_stream_seed(s, 2), grid.n2,
                               Target::profitable);
        cell.objective = (1.0 - grid.beta) * cell.o1.p_hat + grid.beta * cell.o2.p_hat;
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

std::vector<SweepCell> run_sweep(const SweepGrid& grid) {
    grid.validate();
    const int ne = grid.ei.count(), nd = grid.de.count(), np = grid.dp.count();
    const int total = ne * nd * np;
    std::vector<SweepCell> cells(static_cast<std::size_t>(total));
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= total) return;
            const int ei = grid.ei.value(idx / (nd * np));
            const int de = grid.de.value(idx / np % nd);
            const int dp = grid.dp.value(idx % np);
            SweepGrid one = grid;
            one.threads = 1;  // cells are the unit of parallelism here
            cells[static_cast<std::size_t>(idx)] = run_cell(one, ei, de, dp);
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned nw = std::min<unsigned>(grid.threads > 0 ? grid.threads : hw,
                                           static_cast<unsigned>(total));
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nw; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return cells;
}

std::vector<CompareRow> compare_designs(const std::vector<CompareCell>& cells,
                                        const std::vector<std::array<int, 3>>& candidates,
                                        const std::vector<double>& betas) {
    if (cells.empty()) throw std::invalid_argument("compare: no cells");
    std::vector<CompareRow> rows;
    for (double beta : betas) {
        if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must be in [0, 1]");
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cells)
            best = std::min(best, (1.0 - beta) * c.o1 + beta * c.o2);
        for (const auto& cand : candidates) {
            const CompareCell* found = nullptr;
            for (const auto& c : cells)
                if (c.xi == cand) {
                    found = &c;
                    break;
                }
            if (!found)
                throw std::invalid_argument("compare: candidate " + std::to_string(cand[0]) + "," +
                                            std::to_string(cand[1]) + "," +
                                            std::to_string(cand[2]) + " is not in the grid");
            const double obj = (1.0 - beta) * found->o1 + beta * found->o2;
            rows.push_back({beta, cand, obj > 0.0 ? best / obj : 1.0});
        }
    }
    return rows;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += k[static_cast<std::size_t>(i + radius)];
    }
    for (auto& v : k) v /= sum;
    return k;
}

int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - i - 1;
    }
    return i;
}

}  // namespace

std::vector<double> smooth_grid(const std::vector<double>& values, int ne, int nd, int np,
                                double sigma) {
    if (static_cast<std::size_t>(ne) * static_cast<std::size_t>(nd) *
            static_cast<std::size_t>(np) != values.size())
        throw std::invalid_argument("smooth_grid: dimensions do not match value count");
    if (sigma <= 0.0) return values;
    const auto kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    std::vector<double> cur = values, nxt(values.size());
    auto at = [&](std::vector<double>& v, int a, int b, int c) -> double& {
        return v[(static_cast<std::size_t>(a) * nd + b) * np + c];
    };
    const int dims[3] = {ne, nd, np};
    for (int axis = 0; axis < 3; ++axis) {
        for (int a = 0; a < ne; ++a)
            for (int b = 0; b < nd; ++b)
                for (int c = 0; c < np; ++c) {
                    double acc = 0.0;
                    for (int o = -radius; o <= radius; ++o) {
                        int ia = a, ib = b, ic = c;
                        if (axis == 0) ia = reflect(a + o, dims[0]);
                        if (axis == 1) ib = reflect(b + o, dims[1]);
                        if (axis == 2) ic = reflect(c + o, dims[2]);
                        acc += kernel[static_cast<std::size_t>(o + radius)] * at(cur, ia, ib, ic);
                    }
                    at(nxt, a, b, c) = acc;
                }
        std::swap(cur, nxt);
    }
    return cur;
}

}  // namespace reorg
