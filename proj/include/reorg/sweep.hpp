#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "reorg/estimators.hpp"

namespace reorg {

struct GridRange {
    int lo = 0;
    int hi = 0;
    int step = 1;

    int count() const;
    int value(int i) const { return lo + i * step; }
};

GridRange parse_grid_range(const std::string& spec);  // "LO:HI:STEP"

// Design objective O(xi, beta) = (1-beta) Pr[deep reorg feasible]
// + beta Pr[selfish-mine profitable], evaluated per grid point.
// n1 and n2 are fork-block counts of the two attacks.
struct SweepGrid {
    GridRange ei{0, 32, 1};
    GridRange de{4, 20, 1};
    GridRange dp{0, 60, 1};
    double alpha = 0.45;
    double beta = 0.5;
    int n1 = 20;  // deep-reorg fork blocks
    int n2 = 3;   // selfish-mine fork blocks
    std::uint64_t samples_per_cell = 100'000;
    std::uint64_t seed = 1;
    std::uint64_t is_hit_threshold = 100;  // below this many MC hits, retry with IS
    int threads = 0;

    void validate() const;
};

struct SweepCell {
    ProtocolParams params;
    EstimateResult o1;       // Pr[F_{n1}]
    EstimateResult o2;       // Pr[P_{n2}]
    double objective = 0.0;  // (1-beta) o1 + beta o2
    bool failed = false;
    std::string error;
};

// One cell per grid tuple, row-major in (ei, de, dp). Cell seeds derive from
// (seed, ei, de, dp), so any sub-grid reproduces the same values.
std::vector<SweepCell> run_sweep(const SweepGrid& grid);

// Evaluates a single design point with the same derived seed the grid uses.
SweepCell run_cell(const SweepGrid& grid, int ei, int de, int dp);

struct CompareInput {
    std::array<int, 3> xi;  // candidate (ei, de, dp)
};

struct CompareRow {
    double beta;
    std::array<int, 3> xi;
    double ratio;  // min objective over all cells / candidate objective
};

struct CompareCell {
    std::array<int, 3> xi;
    double o1;
    double o2;
};

// Ratio-to-optimum report over a beta list. Throws std::invalid_argument when
// a candidate is not among the cells.
std::vector<CompareRow> compare_designs(const std::vector<CompareCell>& cells,
                                        const std::vector<std::array<int, 3>>& candidates,
                                        const std::vector<double>& betas);

// Separable Gaussian filter with reflect padding over the objective values of
// a full rectangular grid, for visualization export. sigma is in grid cells;
// sigma == 0 is the identity.
std::vector<double> smooth_grid(const std::vector<double>& values, int ne, int nd, int np,
                                double sigma);

}  // namespace reorg
