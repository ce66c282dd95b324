#include "ssbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ssbm/errors.hpp"

namespace ssbm {

SpinConfig threshold_states(const PseudoSpinState& state, ThresholdMode mode) {
    SpinConfig out;
    out.spins.resize(state.phi.size());
    for (std::size_t i = 0; i < state.phi.size(); ++i) {
        double v = state.phi[i];
        if (mode == ThresholdMode::Midpoint) {
            out.spins[i] = v >= 0.5 ? 1 : -1;
        } else {
            out.spins[i] = v > 0.8 ? 1 : (v < 0.2 ? -1 : 0);
        }
    }
    return out;
}

namespace {
void require_determinate(const SpinConfig& spins, const ProblemInstance& inst,
                         const char* what) {
    if (int(spins.spins.size()) != inst.n)
        throw ValidationError("spin configuration length does not match instance");
    if (!spins.determinate())
        throw ValidationError(std::string(what) + " needs fully determinate spins");
}
}  // namespace

double ising_energy(const SpinConfig& spins, const ProblemInstance& inst) {
    require_determinate(spins, inst, "ising_energy");
    double e = 0.0;
    for (const Edge& ed : inst.edges)
        e += ed.w * spins.spins[ed.i] * spins.spins[ed.j];
    return e;
}

double cut_value(const SpinConfig& spins, const ProblemInstance& inst) {
    require_determinate(spins, inst, "cut_value");
    double cv = 0.0;
    for (const Edge& ed : inst.edges)
        cv += ed.w * (1.0 - spins.spins[ed.i] * spins.spins[ed.j]) * 0.5;
    return cv;
}

std::string canonical_pattern(const SpinConfig& spins) {
    if (!spins.determinate())
        throw ValidationError("canonical_pattern needs fully determinate spins");
    std::string s(spins.spins.size(), '0');
    std::string f(spins.spins.size(), '0');
    for (std::size_t i = 0; i < spins.spins.size(); ++i) {
        s[i] = spins.spins[i] > 0 ? '1' : '0';
        f[i] = spins.spins[i] > 0 ? '0' : '1';
    }
    return std::min(s, f);
}

PatternCensus pattern_census(const std::vector<SpinConfig>& configs) {
    PatternCensus census;
    census.total = int(configs.size());
    std::unordered_map<std::string, int> counts;
    for (const SpinConfig& c : configs) {
        if (!c.determinate()) continue;
        ++census.converged;
        ++counts[canonical_pattern(c)];
    }
    census.table.assign(counts.begin(), counts.end());
    std::sort(census.table.begin(), census.table.end(),
              [](const auto& x, const auto& y) {
                  if (x.second != y.second) return x.second > y.second;
                  return x.first < y.first;
              });
    census.distinct = int(census.table.size());
    if (census.converged > 0)
        census.modal_fraction = double(census.table.front().second) / census.converged;
    return census;
}

CutHistogram cut_histogram(const std::vector<RunRecord>& records, int step,
                           double bin_width) {
    if (bin_width <= 0.0) throw ValidationError("bin width must be positive");
    if (records.empty()) throw ValidationError("no run records to histogram");
    std::vector<double> cuts;
    cuts.reserve(records.size());
    for (const RunRecord& r : records) {
        const StepRecord* hit = nullptr;
        for (const StepRecord& row : r.trajectory)
            if (row.step == step) {
                hit = &row;
                break;
            }
        if (!hit)
            throw ValidationError("step " + std::to_string(step) +
                                  " was not recorded for sample " +
                                  std::to_string(r.sample_id));
        cuts.push_back(hit->cut);
    }
    long long kmin = 0, kmax = 0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        long long k = (long long)std::floor(cuts[i] / bin_width);
        if (i == 0 || k < kmin) kmin = k;
        if (i == 0 || k > kmax) kmax = k;
    }
    CutHistogram h;
    h.step = step;
    h.sample_count = int(cuts.size());
    int bins = int(kmax - kmin + 1);
    h.counts.assign(bins, 0);
    h.bin_lo.resize(bins);
    h.bin_hi.resize(bins);
    for (int b = 0; b < bins; ++b) {
        h.bin_lo[b] = double(kmin + b) * bin_width;
        h.bin_hi[b] = double(kmin + b + 1) * bin_width;
    }
    for (double cv : cuts)
        ++h.counts[int((long long)std::floor(cv / bin_width) - kmin)];
    return h;
}

LandscapeGrid psi_landscape(LandscapeKind kind, int resolution) {
    if (resolution < 2) throw ValidationError("landscape resolution must be >= 2");
    LandscapeGrid g;
    g.resolution = resolution;
    g.phi.resize(resolution);
    std::vector<double> root(resolution);
    for (int t = 0; t < resolution; ++t) {
        g.phi[t] = double(t) / double(resolution - 1);
        root[t] = std::sqrt(g.phi[t]);
    }
    g.value.resize(std::size_t(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        for (int k = 0; k < resolution; ++k) {
            // 1 - phi[k] on this lattice is exactly phi[resolution-1-k]; using
            // the mirrored node keeps the antiferro zero locus exact.
            double other = kind == LandscapeKind::Antiferro
                               ? root[resolution - 1 - k]
                               : root[k];
            double v = -(root[i] - other);
            g.value[std::size_t(i) * resolution + k] = v == 0.0 ? 0.0 : v;
        }
    }
    return g;
}

}  // namespace ssbm
