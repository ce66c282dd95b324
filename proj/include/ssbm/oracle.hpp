#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssbm/problems.hpp"

namespace ssbm {

struct OracleResult {
    double best_cut = 0.0;
    double best_energy = 0.0;
    std::vector<std::string> optimal_configs;  // canonical patterns at the optimum
    std::uint64_t enumerated_count = 0;
};

// Exhaustive optimum over all 2^(n-1) configurations (spin 0 fixed +1 by flip
// symmetry) with incremental Gray-code energy updates. Throws SizeCapError
// for n > 24.
OracleResult exact_best(const ProblemInstance& inst);

// Deterministic multi-start 1-opt local search: from each random +-1 start,
// repeatedly applies the best-improving single flip (lowest index breaks
// ties) until 1-opt stable; returns the best over starts.
OracleResult local_search_1opt(const ProblemInstance& inst, int starts,
                               std::uint64_t seed);

}  // namespace ssbm
