#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ssbm {

struct Edge {
    int i, j;   // 0-based, i < j after normalization
    double w;   // nonzero; w > 0 antiferro, w < 0 ferro
};

// Undirected graph with signed unit weights. The coupling magnitude J is a
// run parameter, not part of the instance.
struct ProblemInstance {
    int n = 0;
    std::vector<Edge> edges;  // normalized: i < j, sorted lexicographically

    // Adjacency (built by finalize): per node, antiferro (w>0) and ferro
    // (w<0) neighbor lists.
    std::vector<std::vector<int>> af;
    std::vector<std::vector<int>> f;

    // Dense fast path: set when the instance is a complete graph with all
    // |w| == 1. af_bits holds one bit row per node (bit j set <=> edge (i,j)
    // antiferro); row stride words_per_row.
    bool dense = false;
    int words_per_row = 0;
    std::vector<std::uint64_t> af_bits;

    int degree(int v) const { return int(af[v].size() + f[v].size()); }
    double weight_sum() const;

    // Validates, normalizes edge order, builds adjacency and the dense path.
    void finalize();
};

enum class WeightMode { AllAf, RandomPm1 };

ProblemInstance gen_circulant(int n, const std::vector<int>& offsets, int sign);
ProblemInstance gen_complete(int n, WeightMode mode, std::uint64_t seed);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

// 1 / max node degree: the useful upper bound for the coupling magnitude.
double j_upper_bound(const ProblemInstance& inst);

}  // namespace ssbm
