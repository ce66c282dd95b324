#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssbm/core.hpp"
#include "ssbm/problems.hpp"

namespace ssbm {

enum class ThresholdMode { Midpoint, Band80_20 };

// +1, -1, or 0 = indeterminate (band mode only).
struct SpinConfig {
    std::vector<int> spins;
    bool determinate() const {
        for (int s : spins)
            if (s == 0) return false;
        return true;
    }
};

SpinConfig threshold_states(const PseudoSpinState& state, ThresholdMode mode);

// E = sum w s_i s_j over edges, unit weights (J magnitude never enters).
double ising_energy(const SpinConfig& spins, const ProblemInstance& inst);

// CV = sum w (1 - s_i s_j)/2 = (sum w - E)/2.
double cut_value(const SpinConfig& spins, const ProblemInstance& inst);

// Lexicographically smaller of the bit pattern (+1 -> '1', -1 -> '0') and its
// global flip.
std::string canonical_pattern(const SpinConfig& spins);

struct PatternCensus {
    int distinct = 0;
    std::vector<std::pair<std::string, int>> table;  // sorted by count desc, then pattern
    double modal_fraction = 0.0;                     // modal count / converged count
    int converged = 0;                               // samples with no indeterminate spin
    int total = 0;
};

PatternCensus pattern_census(const std::vector<SpinConfig>& configs);

struct CutHistogram {
    std::vector<double> bin_lo, bin_hi;
    std::vector<int> counts;
    int step = 0;
    int sample_count = 0;
};

// Bins the cut value recorded at `step` across samples. Throws ValidationError
// if any record lacks that step.
CutHistogram cut_histogram(const std::vector<RunRecord>& records, int step,
                           double bin_width);

enum class LandscapeKind { Ferro, Antiferro };

// Pairwise field term at J=1 on a uniform resolution x resolution grid over
// [0,1]^2: antiferro -(sqrt(phi_i) - sqrt(1-phi_k)), ferro -(sqrt(phi_i) -
// sqrt(phi_k)). The complement 1-phi_k is evaluated at the complementary grid
// index so the antiferro zero locus phi_i + phi_k = 1 is exact on grid points.
struct LandscapeGrid {
    int resolution = 0;
    std::vector<double> phi;    // grid coordinates, length resolution
    std::vector<double> value;  // row-major [i_index * resolution + k_index]
};

LandscapeGrid psi_landscape(LandscapeKind kind, int resolution);

}  // namespace ssbm
