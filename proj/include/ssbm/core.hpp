#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ssbm/problems.hpp"

namespace ssbm {

struct PseudoSpinState {
    std::vector<double> phi;  // each in [0,1]
};

struct PsiField {
    std::vector<double> q;
};

enum class RuleKind { Basic, Psi, Composite, Evolved };

struct UpdateRule {
    RuleKind kind = RuleKind::Psi;
    // Basic-map parameters (only used by RuleKind::Basic).
    double gamma = 6.283185307179586476925286766559;  // 2*pi
    double theta_b = 0.0;
};

struct Phase {
    int n;      // nesting count (Evolved); ignored by other rules
    int steps;  // > 0
};

struct NestSchedule {
    std::vector<Phase> phases;
    int total_steps() const {
        int t = 0;
        for (const auto& p : phases) t += p.steps;
        return t;
    }
};

struct RunConfig {
    UpdateRule rule;
    NestSchedule schedule;
    double j_magnitude = 0.0;
    double noise_sigma = 1e-3;
    std::uint64_t seed = 0;
    int record_every = 10;
    bool per_step_noise = false;
};

struct StepRecord {
    int step;        // 1-based step index
    int n_active;    // nesting count of the active phase (0 for non-evolved)
    double energy;   // midpoint-thresholded Ising energy, unit weights
    double cut;      // (sum w - energy)/2
};

struct RunRecord {
    int sample_id = 0;
    std::uint64_t stream_seed = 0;
    std::uint64_t config_fingerprint = 0;
    std::vector<StepRecord> trajectory;
    // Full states at phase boundaries (step index, state); final step included.
    std::vector<std::pair<int, std::vector<double>>> snapshots;
    std::vector<double> final_phi;
};

// --- deterministic seeding -------------------------------------------------

// SplitMix64 step; used to derive independent per-sample stream seeds.
std::uint64_t splitmix64(std::uint64_t& x);
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index);

// FNV-1a over raw bytes; used for config/instance/output fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// Hash of the canonicalized config (rule, schedule, j, sigma, seed,
// record cadence, noise mode). Changes iff a semantically meaningful
// field changes.
std::uint64_t config_fingerprint(const RunConfig& config);

// Portable Gaussian source: mt19937_64 + Box-Muller (std::normal_distribution
// is implementation-defined, which would break frozen test values).
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
    double next();  // standard normal
    std::uint64_t next_u64() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// --- dynamics ---------------------------------------------------------------

// sin^2((pi/2)x); pins x in {0, 1/2, 1} to exact fixed/end points so that
// iterated maps do not drift off them in floating point.
double half_sine_sq(double x);

// sin^2((gamma/2) phi + theta_b)
double base_map(double phi, double gamma, double theta_b);

// q_i = -sum_F J(sqrt(phi_i) - sqrt(phi_k)) - sum_AF J(sqrt(phi_i) - sqrt(1-phi_k))
PsiField psi_field(const PseudoSpinState& state, const ProblemInstance& inst,
                   double j_magnitude);

// phi'_i = sin^2((pi/2)(sqrt(phi_i) + q_i)^2): the field pulls the amplitude
// toward its zero locus. Synchronous: all q from the pre-step state.
PseudoSpinState psi_update(const PseudoSpinState& state, const ProblemInstance& inst,
                           double j_magnitude);

// Conjugate-averaged update: 1/2 [branch(phi, q) + 1 - branch(1-phi, qbar)]
// with qbar the field of the complemented state.
PseudoSpinState composite_update(const PseudoSpinState& state,
                                 const ProblemInstance& inst, double j_magnitude);

// Applies y <- sin^2((pi/2)y) n times; n = 0 is the identity.
double nest(double x, int n);

// nest(composite_update(state), n) elementwise.
PseudoSpinState evolved_update(const PseudoSpinState& state,
                               const ProblemInstance& inst, double j_magnitude,
                               int n);

// phi_i = 1/2 + Gaussian(0, sigma^2), clamped to [1e-9, 1-1e-9].
PseudoSpinState init_state(int m, double noise_sigma, GaussianRng& rng);

// Executes the schedule for one sample. `sample_id` selects the per-sample
// stream: stream_seed = derive_stream_seed(config.seed, sample_id).
RunRecord run(const ProblemInstance& inst, const RunConfig& config,
              int sample_id = 0);

// Batch over samples 0..samples-1 on `workers` threads. Deterministic:
// identical output regardless of worker count.
std::vector<RunRecord> run_batch(const ProblemInstance& inst, const RunConfig& config,
                                 int samples, int workers);

}  // namespace ssbm
