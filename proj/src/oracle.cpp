#include "ssbm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "ssbm/analysis.hpp"
#include "ssbm/errors.hpp"

namespace ssbm {

namespace {

struct WeightedAdj {
    std::vector<std::vector<std::pair<int, double>>> nbr;
    explicit WeightedAdj(const ProblemInstance& inst) : nbr(inst.n) {
        for (const Edge& e : inst.edges) {
            nbr[e.i].push_back({e.j, e.w});
            nbr[e.j].push_back({e.i, e.w});
        }
    }
};

SpinConfig to_config(const std::vector<int>& s) {
    SpinConfig c;
    c.spins = s;
    return c;
}

}  // namespace

OracleResult exact_best(const ProblemInstance& inst) {
    if (inst.n > 24)
        throw SizeCapError("exact enumeration is capped at 24 nodes (got " +
                           std::to_string(inst.n) + ")");
    WeightedAdj adj(inst);
    const double wsum = inst.weight_sum();

    std::vector<int> s(inst.n, 1);
    double e = wsum;  // all spins aligned: E = sum of weights
    double best_e = e;
    std::set<std::string> best_patterns{canonical_pattern(to_config(s))};

    const int m = inst.n - 1;  // spin 0 stays +1 (global flip symmetry)
    const std::uint64_t count = 1ULL << m;
    for (std::uint64_t t = 1; t < count; ++t) {
        int v = std::countr_zero(t) + 1;
        double h = 0.0;
        for (auto [u, w] : adj.nbr[v]) h += w * s[u];
        e -= 2.0 * s[v] * h;
        s[v] = -s[v];
        if (e < best_e) {
            best_e = e;
            best_patterns.clear();
            best_patterns.insert(canonical_pattern(to_config(s)));
        } else if (e == best_e) {
            best_patterns.insert(canonical_pattern(to_config(s)));
        }
    }

    OracleResult out;
    out.best_energy = best_e;
    out.best_cut = (wsum - best_e) / 2.0;
    out.optimal_configs.assign(best_patterns.begin(), best_patterns.end());
    out.enumerated_count = count;
    return out;
}

OracleResult local_search_1opt(const ProblemInstance& inst, int starts,
                               std::uint64_t seed) {
    if (starts < 1) throw ValidationError("local search needs at least one start");
    WeightedAdj adj(inst);
    const double wsum = inst.weight_sum();
    std::mt19937_64 eng(seed);

    double best_e = 0.0;
    bool have_best = false;
    std::set<std::string> best_patterns;

    std::vector<int> s(inst.n);
    std::vector<double> h(inst.n);  // local field sum_u w_uv s_u
    for (int r = 0; r < starts; ++r) {
        for (int i = 0; i < inst.n; ++i) s[i] = (eng() & 1) ? 1 : -1;
        for (int i = 0; i < inst.n; ++i) {
            double acc = 0.0;
            for (auto [u, w] : adj.nbr[i]) acc += w * s[u];
            h[i] = acc;
        }
        for (;;) {
            // Flipping v changes the cut by s_v * h_v; take the best strictly
            // improving flip, lowest index on ties.
            int pick = -1;
            double best_gain = 0.0;
            for (int v = 0; v < inst.n; ++v) {
                double gain = s[v] * h[v];
                if (gain > best_gain) {
                    best_gain = gain;
                    pick = v;
                }
            }
            if (pick < 0) break;
            s[pick] = -s[pick];
            for (auto [u, w] : adj.nbr[pick]) h[u] += 2.0 * w * s[pick];
        }
        double e = 0.0;
        for (const Edge& ed : inst.edges) e += ed.w * s[ed.i] * s[ed.j];
        if (!have_best || e < best_e) {
            have_best = true;
            best_e = e;
            best_patterns.clear();
            best_patterns.insert(canonical_pattern(to_config(s)));
        } else if (e == best_e) {
            best_patterns.insert(canonical_pattern(to_config(s)));
        }
    }

    OracleResult out;
    out.best_energy = best_e;
    out.best_cut = (wsum - best_e) / 2.0;
    out.optimal_configs.assign(best_patterns.begin(), best_patterns.end());
    out.enumerated_count = std::uint64_t(starts);
    return out;
}

}  // namespace ssbm
