#include "ssbm/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "ssbm/analysis.hpp"
#include "ssbm/errors.hpp"

namespace ssbm {

namespace {
constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr double kClampLo = 1e-9;
constexpr double kClampHi = 1.0 - 1e-9;
}  // namespace

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    (void)splitmix64(s);  // decorrelate master from stream 0
    s += index * 0x9e3779b97f4a7c15ULL;
    std::uint64_t t = s;
    return splitmix64(t);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_fingerprint(const RunConfig& config) {
    char buf[64];
    std::string s;
    auto add = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
        s += buf;
    };
    switch (config.rule.kind) {
        case RuleKind::Basic: s += "rule=basic;"; break;
        case RuleKind::Psi: s += "rule=psi;"; break;
        case RuleKind::Composite: s += "rule=composite;"; break;
        case RuleKind::Evolved: s += "rule=evolved;"; break;
    }
    add("gamma", config.rule.gamma);
    add("theta_b", config.rule.theta_b);
    s += "schedule=";
    for (const auto& p : config.schedule.phases)
        s += std::to_string(p.n) + ":" + std::to_string(p.steps) + ",";
    s += ";";
    add("j", config.j_magnitude);
    add("sigma", config.noise_sigma);
    s += "seed=" + std::to_string(config.seed) + ";";
    s += "record_every=" + std::to_string(config.record_every) + ";";
    s += config.per_step_noise ? "per_step_noise=1;" : "per_step_noise=0;";
    return fnv1a64(s.data(), s.size());
}

double GaussianRng::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] uniforms built from the top 53 bits.
    double u1, u2;
    do {
        u1 = double((eng_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    } while (u1 <= 0.0);
    u2 = double(eng_() >> 11) * 0x1.0p-53;  // [0,1)
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double half_sine_sq(double x) {
    // Pin the fixed point and the endpoints: libm rounding otherwise walks
    // iterated maps off them (0.5 drifts by ~1e-14 after a dozen nestings).
    if (x == 0.5) return 0.5;
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double s = std::sin(kHalfPi * x);
    return s * s;
}

double base_map(double phi, double gamma, double theta_b) {
    double s = std::sin(0.5 * gamma * phi + theta_b);
    return s * s;
}

// ---------------------------------------------------------------------------
// Field + update engine. The step functions below are pure; this struct only
// caches buffers so the runner does not allocate per step.
namespace {

struct Engine {
    const ProblemInstance& inst;
    double j;
    std::vector<double> a, b, d;        // sqrt(phi), sqrt(1-phi), b-a
    std::vector<double> q, qbar;
    std::vector<double> mask;           // dense path: one expanded row
    std::vector<double> comp;           // complement state 1-phi

    Engine(const ProblemInstance& instance, double j_magnitude)
        : inst(instance), j(j_magnitude) {
        int n = inst.n;
        a.resize(n);
        b.resize(n);
        d.resize(n);
        q.resize(n);
        qbar.resize(n);
        comp.resize(n);
        if (inst.dense) mask.resize(n);
    }

    // Computes q (and qbar when with_conjugate) for `phi`. All sums are kept
    // in per-edge-difference form: each term is exactly 0.0 when every phi is
    // bitwise 1/2, so the field vanishes exactly at the symmetric state for
    // any degree.
    void fields(const std::vector<double>& phi, bool with_conjugate) {
        const int n = inst.n;
        for (int i = 0; i < n; ++i) {
            a[i] = std::sqrt(phi[i]);
            b[i] = std::sqrt(1.0 - phi[i]);
            d[i] = b[i] - a[i];
        }
        if (inst.dense) {
            const std::uint64_t* rows = inst.af_bits.data();
            const int words = inst.words_per_row;
            for (int i = 0; i < n; ++i) {
                const std::uint64_t* row = rows + std::size_t(i) * words;
                for (int w = 0; w < words; ++w) {
                    std::uint64_t bits = row[w];
                    int base = w * 64;
                    int lim = std::min(64, n - base);
                    for (int t = 0; t < lim; ++t)
                        mask[base + t] = double((bits >> t) & 1);
                }
                const double ai = a[i], bi = b[i];
                double accq = 0.0, accqb = 0.0;
                if (with_conjugate) {
                    for (int k = 0; k < n; ++k) {
                        double md = mask[k] * d[k];
                        accq += (a[k] - ai) + md;
                        accqb += (b[k] - bi) - md;
                    }
                } else {
                    for (int k = 0; k < n; ++k)
                        accq += (a[k] - ai) + mask[k] * d[k];
                }
                q[i] = j * accq;
                if (with_conjugate) qbar[i] = j * accqb;
            }
            return;
        }
        for (int i = 0; i < n; ++i) {
            const double ai = a[i], bi = b[i];
            double accq = 0.0, accqb = 0.0;
            for (int k : inst.af[i]) {
                accq += b[k] - ai;   // antiferro couples to the complement port
                accqb += a[k] - bi;
            }
            for (int k : inst.f[i]) {
                accq += a[k] - ai;
                accqb += b[k] - bi;
            }
            q[i] = j * accq;
            qbar[i] = j * accqb;
        }
    }

    // phi' = sin^2((pi/2)(sqrt(phi)+q)^2). The q==0 shortcut keeps the
    // decoupled map exactly sin^2((pi/2)phi) (fl(sqrt(x)^2) != x) and corner
    // states exactly fixed.
    void psi(const std::vector<double>& phi, std::vector<double>& out) {
        fields(phi, false);
        const int n = inst.n;
        out.resize(n);
        for (int i = 0; i < n; ++i) {
            double y;
            if (q[i] == 0.0) {
                y = phi[i];
            } else {
                double x = a[i] + q[i];
                y = x * x;
            }
            out[i] = half_sine_sq(y);
        }
    }

    // 1/2 [branch(phi,q) + 1 - branch(1-phi,qbar)], evaluated as
    // 0.5 + 0.5(branch1 - branch2): bitwise-equal branches give exactly 0.5.
    void composite(const std::vector<double>& phi, std::vector<double>& out) {
        fields(phi, true);
        const int n = inst.n;
        out.resize(n);
        for (int i = 0; i < n; ++i) {
            double y1, y2;
            if (q[i] == 0.0) {
                y1 = phi[i];
            } else {
                double x = a[i] + q[i];
                y1 = x * x;
            }
            if (qbar[i] == 0.0) {
                y2 = 1.0 - phi[i];
            } else {
                double x = b[i] + qbar[i];
                y2 = x * x;
            }
            out[i] = 0.5 + 0.5 * (half_sine_sq(y1) - half_sine_sq(y2));
        }
    }

    void evolved(const std::vector<double>& phi, int nn, std::vector<double>& out) {
        composite(phi, out);
        for (int r = 0; r < nn; ++r)
            for (double& y : out) y = half_sine_sq(y);
    }
};

}  // namespace

PsiField psi_field(const PseudoSpinState& state, const ProblemInstance& inst,
                   double j_magnitude) {
    if (int(state.phi.size()) != inst.n)
        throw ValidationError("state length does not match instance node count");
    Engine eng(inst, j_magnitude);
    eng.fields(state.phi, false);
    PsiField out;
    out.q = std::move(eng.q);
    return out;
}

PseudoSpinState psi_update(const PseudoSpinState& state, const ProblemInstance& inst,
                           double j_magnitude) {
    if (int(state.phi.size()) != inst.n)
        throw ValidationError("state length does not match instance node count");
    Engine eng(inst, j_magnitude);
    PseudoSpinState out;
    eng.psi(state.phi, out.phi);
    return out;
}

PseudoSpinState composite_update(const PseudoSpinState& state,
                                 const ProblemInstance& inst, double j_magnitude) {
    if (int(state.phi.size()) != inst.n)
        throw ValidationError("state length does not match instance node count");
    Engine eng(inst, j_magnitude);
    PseudoSpinState out;
    eng.composite(state.phi, out.phi);
    return out;
}

double nest(double x, int n) {
    for (int r = 0; r < n; ++r) x = half_sine_sq(x);
    return x;
}

PseudoSpinState evolved_update(const PseudoSpinState& state,
                               const ProblemInstance& inst, double j_magnitude,
                               int n) {
    if (int(state.phi.size()) != inst.n)
        throw ValidationError("state length does not match instance node count");
    Engine eng(inst, j_magnitude);
    PseudoSpinState out;
    eng.evolved(state.phi, n, out.phi);
    return out;
}

PseudoSpinState init_state(int m, double noise_sigma, GaussianRng& rng) {
    if (m < 1) throw ValidationError("state needs at least one node");
    PseudoSpinState s;
    s.phi.resize(m);
    for (int i = 0; i < m; ++i) {
        double v = 0.5 + noise_sigma * rng.next();
        s.phi[i] = std::min(kClampHi, std::max(kClampLo, v));
    }
    return s;
}

RunRecord run(const ProblemInstance& inst, const RunConfig& config, int sample_id) {
    if (config.schedule.phases.empty())
        throw ValidationError("schedule must have at least one phase");
    for (const auto& p : config.schedule.phases) {
        if (p.steps <= 0) throw ValidationError("phase step count must be positive");
        if (p.n < 0) throw ValidationError("nesting count must be non-negative");
    }
    if (config.rule.kind == RuleKind::Basic && !inst.edges.empty())
        throw ValidationError("basic rule models the uncoupled map; instance has couplings");
    if (config.j_magnitude < 0.0)
        throw ValidationError("j magnitude must be non-negative");
    if (config.record_every <= 0)
        throw ValidationError("record_every must be positive");

    RunRecord rec;
    rec.sample_id = sample_id;
    rec.stream_seed = derive_stream_seed(config.seed, std::uint64_t(sample_id));
    rec.config_fingerprint = config_fingerprint(config);
    GaussianRng rng(rec.stream_seed);

    PseudoSpinState state = init_state(inst.n, config.noise_sigma, rng);
    Engine eng(inst, config.j_magnitude);
    std::vector<double> next(inst.n);

    const double wsum = inst.weight_sum();
    auto record_row = [&](int step, int n_active) {
        SpinConfig s = threshold_states(state, ThresholdMode::Midpoint);
        double e = ising_energy(s, inst);
        rec.trajectory.push_back({step, n_active, e, (wsum - e) / 2.0});
    };

    const int total = config.schedule.total_steps();
    int first_n = config.rule.kind == RuleKind::Evolved ? config.schedule.phases[0].n : 0;
    record_row(0, first_n);
    rec.snapshots.push_back({0, state.phi});

    int step = 0;
    for (const auto& phase : config.schedule.phases) {
        const int n_active = config.rule.kind == RuleKind::Evolved ? phase.n : 0;
        for (int t = 0; t < phase.steps; ++t) {
            switch (config.rule.kind) {
                case RuleKind::Basic:
                    for (int i = 0; i < inst.n; ++i)
                        next[i] = base_map(state.phi[i], config.rule.gamma,
                                           config.rule.theta_b);
                    break;
                case RuleKind::Psi:
                    eng.psi(state.phi, next);
                    break;
                case RuleKind::Composite:
                    eng.composite(state.phi, next);
                    break;
                case RuleKind::Evolved:
                    eng.evolved(state.phi, phase.n, next);
                    break;
            }
            state.phi.swap(next);
            if (config.per_step_noise && config.noise_sigma > 0.0) {
                for (double& v : state.phi) {
                    v += config.noise_sigma * rng.next();
                    v = std::min(kClampHi, std::max(kClampLo, v));
                }
            }
            ++step;
            if (step % config.record_every == 0 || step == total)
                record_row(step, n_active);
        }
        rec.snapshots.push_back({step, state.phi});
    }
    rec.final_phi = state.phi;
    return rec;
}

std::vector<RunRecord> run_batch(const ProblemInstance& inst, const RunConfig& config,
                                 int samples, int workers) {
    if (samples < 1) throw ValidationError("need at least one sample");
    if (workers < 1) workers = 1;
    std::vector<RunRecord> out(samples);
    if (workers == 1) {
        for (int s = 0; s < samples; ++s) out[s] = run(inst, config, s);
        return out;
    }
    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            int s = cursor.fetch_add(1);
            if (s >= samples) break;
            out[s] = run(inst, config, s);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min(workers, samples);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace ssbm
