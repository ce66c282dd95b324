#include <doctest.h>

#include <cmath>
#include <random>

#include "ssbm/analysis.hpp"
#include "ssbm/errors.hpp"

using namespace ssbm;

namespace {

PseudoSpinState state_of(std::vector<double> phi) {
    PseudoSpinState s;
    s.phi = std::move(phi);
    return s;
}

SpinConfig spins_of(std::vector<int> s) {
    SpinConfig c;
    c.spins = std::move(s);
    return c;
}

}  // namespace

TEST_CASE("thresholding: midpoint boundary and 80/20 band") {
    SpinConfig mid = threshold_states(state_of({0.5, 0.49, 0.51, 0.0, 1.0}),
                                      ThresholdMode::Midpoint);
    CHECK(mid.spins == std::vector<int>{1, -1, 1, -1, 1});
    CHECK(mid.determinate());

    SpinConfig band = threshold_states(state_of({0.95, 0.03, 0.5, 0.8, 0.2}),
                                       ThresholdMode::Band80_20);
    CHECK(band.spins == std::vector<int>{1, -1, 0, 0, 0});
    CHECK_FALSE(band.determinate());
}

TEST_CASE("energy and cut on small graphs") {
    ProblemInstance k3 = gen_complete(3, WeightMode::AllAf, 0);
    SpinConfig s = spins_of({1, 1, -1});
    CHECK(ising_energy(s, k3) == -1.0);
    CHECK(cut_value(s, k3) == 2.0);

    SpinConfig flipped = spins_of({-1, -1, 1});
    CHECK(ising_energy(flipped, k3) == -1.0);
    CHECK(cut_value(flipped, k3) == 2.0);

    ProblemInstance c4 = gen_circulant(4, {1}, 1);
    CHECK(cut_value(spins_of({1, -1, 1, -1}), c4) == 4.0);

    ProblemInstance empty;
    empty.n = 3;
    empty.finalize();
    CHECK(ising_energy(spins_of({1, -1, 1}), empty) == 0.0);

    CHECK_THROWS_AS(ising_energy(spins_of({1, 0, 1}), k3), ValidationError);
    CHECK_THROWS_AS(cut_value(spins_of({1, 0, 1}), k3), ValidationError);
    CHECK_THROWS_AS(ising_energy(spins_of({1, 1}), k3), ValidationError);
}

TEST_CASE("cut identity holds exactly on random +-1 instances") {
    ProblemInstance inst = gen_complete(14, WeightMode::RandomPm1, 5);
    const double wsum = inst.weight_sum();
    std::mt19937_64 eng(7);
    for (int t = 0; t < 100; ++t) {
        SpinConfig s;
        s.spins.resize(14);
        for (int i = 0; i < 14; ++i) s.spins[i] = (eng() & 1) ? 1 : -1;
        CHECK(cut_value(s, inst) == (wsum - ising_energy(s, inst)) / 2.0);
    }
}

TEST_CASE("canonical patterns quotient out the global flip") {
    CHECK(canonical_pattern(spins_of({1, -1, 1})) == "010");
    CHECK(canonical_pattern(spins_of({-1, 1, -1})) == "010");
    CHECK(canonical_pattern(spins_of({1, 1, 1, 1})) == "0000");
    CHECK_THROWS_AS(canonical_pattern(spins_of({1, 0})), ValidationError);
}

TEST_CASE("pattern census") {
    PatternCensus c = pattern_census(
        {spins_of({1, -1, 1}), spins_of({-1, 1, -1}), spins_of({1, 1, -1})});
    CHECK(c.distinct == 2);
    CHECK(c.total == 3);
    CHECK(c.converged == 3);
    CHECK(c.table.front().second == 2);
    CHECK(c.table.front().first == "010");
    CHECK(c.modal_fraction == doctest::Approx(2.0 / 3));

    PatternCensus empty = pattern_census({});
    CHECK(empty.distinct == 0);
    CHECK(empty.modal_fraction == 0.0);

    PatternCensus same = pattern_census({spins_of({1, -1}), spins_of({-1, 1})});
    CHECK(same.distinct == 1);
    CHECK(same.modal_fraction == 1.0);

    PatternCensus mixed = pattern_census({spins_of({1, 0}), spins_of({1, 1})});
    CHECK(mixed.total == 2);
    CHECK(mixed.converged == 1);
    CHECK(mixed.distinct == 1);
    CHECK(mixed.modal_fraction == 1.0);
}

TEST_CASE("cut histogram bins recorded steps") {
    auto make_rec = [](int sid, double cut) {
        RunRecord r;
        r.sample_id = sid;
        r.trajectory.push_back({0, 0, 0.0, 1.0});
        r.trajectory.push_back({5, 0, 0.0, cut});
        return r;
    };
    std::vector<RunRecord> recs = {make_rec(0, 10.0), make_rec(1, 10.0),
                                   make_rec(2, 12.0)};
    CutHistogram h = cut_histogram(recs, 5, 1.0);
    CHECK(h.step == 5);
    CHECK(h.sample_count == 3);
    REQUIRE(h.counts.size() == 3);
    CHECK(h.bin_lo[0] == 10.0);
    CHECK(h.bin_hi[0] == 11.0);
    CHECK(h.counts[0] == 2);
    CHECK(h.counts[1] == 0);
    CHECK(h.counts[2] == 1);
    int total = 0;
    for (int c : h.counts) total += c;
    CHECK(total == h.sample_count);

    CutHistogram single = cut_histogram({make_rec(0, 3.5)}, 5, 1.0);
    CHECK(single.counts == std::vector<int>{1});
    CHECK(single.bin_lo[0] == 3.0);

    CHECK_THROWS_AS(cut_histogram(recs, 7, 1.0), ValidationError);
    CHECK_THROWS_AS(cut_histogram(recs, 5, 0.0), ValidationError);
    CHECK_THROWS_AS(cut_histogram({}, 5, 1.0), ValidationError);
}

TEST_CASE("pairwise field landscape: exact zero loci and signs") {
    LandscapeGrid af = psi_landscape(LandscapeKind::Antiferro, 101);
    REQUIRE(af.resolution == 101);
    REQUIRE(af.phi.size() == 101);
    CHECK(af.phi.front() == 0.0);
    CHECK(af.phi.back() == 1.0);
    for (int i = 0; i < 101; ++i) {
        int k = 100 - i;  // phi_i + phi_k = 1
        CHECK(af.value[std::size_t(i) * 101 + k] == 0.0);
    }
    CHECK(af.value[std::size_t(0) * 101 + 0] == 1.0);     // (0,0): -(0 - 1)
    CHECK(af.value[std::size_t(100) * 101 + 100] == -1.0);  // (1,1): -(1 - 0)
    // sign pattern: positive below the anti-diagonal, negative above
    CHECK(af.value[std::size_t(10) * 101 + 20] > 0.0);
    CHECK(af.value[std::size_t(90) * 101 + 80] < 0.0);

    LandscapeGrid f = psi_landscape(LandscapeKind::Ferro, 51);
    for (int i = 0; i < 51; ++i) CHECK(f.value[std::size_t(i) * 51 + i] == 0.0);
    CHECK(f.value[std::size_t(50) * 51 + 0] == -1.0);  // (1,0)
    CHECK(f.value[std::size_t(0) * 51 + 50] == 1.0);   // (0,1)

    LandscapeGrid tiny = psi_landscape(LandscapeKind::Ferro, 2);
    CHECK(tiny.phi == std::vector<double>{0.0, 1.0});

    CHECK_THROWS_AS(psi_landscape(LandscapeKind::Ferro, 1), ValidationError);
}
