#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "ssbm/errors.hpp"
#include "ssbm/problems.hpp"

using namespace ssbm;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("ssbm_problems_" + name)).string();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

}  // namespace

TEST_CASE("circulant generator: offsets 1,8 on 16 nodes") {
    ProblemInstance inst = gen_circulant(16, {1, 8}, 1);
    CHECK(inst.n == 16);
    CHECK(inst.edges.size() == 24);  // 16 ring edges + 8 diameter edges
    for (int v = 0; v < 16; ++v) CHECK(inst.degree(v) == 3);
    for (const Edge& e : inst.edges) CHECK(e.w == 1.0);
    CHECK(inst.weight_sum() == 24.0);
    CHECK(j_upper_bound(inst) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK_FALSE(inst.dense);
}

TEST_CASE("circulant generator: plain degrees and dedup") {
    ProblemInstance c10 = gen_circulant(10, {1, 2}, 1);
    CHECK(c10.edges.size() == 20);
    for (int v = 0; v < 10; ++v) CHECK(c10.degree(v) == 4);

    ProblemInstance c8a = gen_circulant(8, {1, 1}, 1);
    ProblemInstance c8b = gen_circulant(8, {1}, 1);
    CHECK(c8a.edges.size() == c8b.edges.size());

    ProblemInstance ring = gen_circulant(6, {1}, -1);
    for (const Edge& e : ring.edges) CHECK(e.w == -1.0);
    for (int v = 0; v < 6; ++v) {
        CHECK(ring.af[v].empty());
        CHECK(ring.f[v].size() == 2);
    }
}

TEST_CASE("circulant generator: validation") {
    CHECK_THROWS_AS(gen_circulant(2, {1}, 1), ValidationError);
    CHECK_THROWS_AS(gen_circulant(16, {}, 1), ValidationError);
    CHECK_THROWS_AS(gen_circulant(16, {0}, 1), ValidationError);
    CHECK_THROWS_AS(gen_circulant(4, {3}, 1), ValidationError);  // offset > n/2
    CHECK_THROWS_AS(gen_circulant(16, {1}, 2), ValidationError);
}

TEST_CASE("complete generator: edge count, signs, determinism") {
    ProblemInstance inst = gen_complete(40, WeightMode::RandomPm1, 12345);
    CHECK(inst.edges.size() == 40 * 39 / 2);
    int af_count = 0;
    for (const Edge& e : inst.edges) {
        CHECK((e.w == 1.0 || e.w == -1.0));
        if (e.w > 0) ++af_count;
    }
    // Binomial(780, 1/2): mean 390, sigma ~13.96; 6-sigma window.
    CHECK(std::abs(af_count - 390) <= 84);

    ProblemInstance again = gen_complete(40, WeightMode::RandomPm1, 12345);
    REQUIRE(again.edges.size() == inst.edges.size());
    for (std::size_t k = 0; k < inst.edges.size(); ++k)
        CHECK(inst.edges[k].w == again.edges[k].w);

    ProblemInstance all_af = gen_complete(5, WeightMode::AllAf, 0);
    CHECK(all_af.edges.size() == 10);
    for (const Edge& e : all_af.edges) CHECK(e.w == 1.0);
    CHECK(j_upper_bound(all_af) == 0.25);

    CHECK_THROWS_AS(gen_complete(1, WeightMode::AllAf, 0), ValidationError);
}

TEST_CASE("dense fast-path detection and bit rows") {
    ProblemInstance k70 = gen_complete(70, WeightMode::RandomPm1, 9);
    REQUIRE(k70.dense);
    REQUIRE(k70.words_per_row == 2);
    // af_bits agrees with the edge list in both directions, empty diagonal.
    std::set<std::pair<int, int>> af_edges;
    for (const Edge& e : k70.edges)
        if (e.w > 0) {
            af_edges.insert({e.i, e.j});
            af_edges.insert({e.j, e.i});
        }
    for (int i = 0; i < 70; ++i)
        for (int j = 0; j < 70; ++j) {
            bool bit = (k70.af_bits[std::size_t(i) * 2 + j / 64] >> (j % 64)) & 1;
            CHECK(bit == (af_edges.count({i, j}) > 0));
        }

    ProblemInstance tri = gen_circulant(3, {1}, 1);  // triangle = complete
    CHECK(tri.dense);

    ProblemInstance decimal;
    decimal.n = 3;
    decimal.edges = {{0, 1, 0.25}, {0, 2, 1.0}, {1, 2, -1.0}};
    decimal.finalize();
    CHECK_FALSE(decimal.dense);  // non-unit weight
}

TEST_CASE("finalize: normalization and validation") {
    ProblemInstance inst;
    inst.n = 4;
    inst.edges = {{2, 0, 1.0}, {3, 1, -1.0}};
    inst.finalize();
    CHECK(inst.edges[0].i == 0);
    CHECK(inst.edges[0].j == 2);
    CHECK(inst.af[0] == std::vector<int>{2});
    CHECK(inst.f[1] == std::vector<int>{3});
    CHECK(inst.degree(0) == 1);
    CHECK(inst.weight_sum() == 0.0);

    ProblemInstance bad;
    bad.n = 0;
    CHECK_THROWS_AS(bad.finalize(), ValidationError);
    bad.n = 3;
    bad.edges = {{1, 1, 1.0}};
    CHECK_THROWS_AS(bad.finalize(), ValidationError);  // self-loop
    bad.edges = {{0, 5, 1.0}};
    CHECK_THROWS_AS(bad.finalize(), ValidationError);  // out of range
    bad.edges = {{0, 1, 0.0}};
    CHECK_THROWS_AS(bad.finalize(), ValidationError);  // zero weight
    bad.edges = {{0, 1, 1.0}, {1, 0, -1.0}};
    CHECK_THROWS_AS(bad.finalize(), ValidationError);  // duplicate edge
}

TEST_CASE("save/load round trip is the identity") {
    ProblemInstance inst = gen_complete(12, WeightMode::RandomPm1, 3);
    std::string path = temp_path("k12.txt");
    save_instance(inst, path);
    ProblemInstance back = load_instance(path);
    REQUIRE(back.n == inst.n);
    REQUIRE(back.edges.size() == inst.edges.size());
    for (std::size_t k = 0; k < inst.edges.size(); ++k) {
        CHECK(back.edges[k].i == inst.edges[k].i);
        CHECK(back.edges[k].j == inst.edges[k].j);
        CHECK(back.edges[k].w == inst.edges[k].w);
    }
    std::remove(path.c_str());

    ProblemInstance dec;
    dec.n = 3;
    dec.edges = {{0, 1, 0.25}, {1, 2, -2.5}};
    dec.finalize();
    std::string path2 = temp_path("decimal.txt");
    save_instance(dec, path2);
    ProblemInstance back2 = load_instance(path2);
    CHECK(back2.edges[0].w == 0.25);
    CHECK(back2.edges[1].w == -2.5);
    std::remove(path2.c_str());
}

TEST_CASE("load: comments, blank lines, 1-based indexing") {
    std::string path = temp_path("fmt.txt");
    write_text(path,
               "# a comment\n"
               "\n"
               "3 2   # trailing comment\n"
               "1 2 1\n"
               "# interior comment\n"
               "2 3 -1\n");
    ProblemInstance inst = load_instance(path);
    CHECK(inst.n == 3);
    REQUIRE(inst.edges.size() == 2);
    CHECK(inst.edges[0].i == 0);
    CHECK(inst.edges[0].j == 1);
    CHECK(inst.edges[1].w == -1.0);
    std::remove(path.c_str());
}

TEST_CASE("load: malformed files are I/O errors") {
    CHECK_THROWS_AS(load_instance(temp_path("missing_nope.txt")), IoError);

    struct Case {
        const char* name;
        const char* body;
    } cases[] = {
        {"badheader.txt", "x y\n1 2 1\n"},
        {"trailhdr.txt", "3 1 9\n1 2 1\n"},
        {"revedge.txt", "3 1\n2 1 1\n"},
        {"selfedge.txt", "3 1\n2 2 1\n"},
        {"zerow.txt", "3 1\n1 2 0\n"},
        {"oor.txt", "3 1\n1 4 1\n"},
        {"short.txt", "3 2\n1 2 1\n"},
        {"dup.txt", "3 2\n1 2 1\n1 2 1\n"},
        {"maledge.txt", "3 1\n1 2\n"},
        {"nohdr.txt", "# only comments\n"},
    };
    for (const Case& c : cases) {
        std::string path = temp_path(c.name);
        write_text(path, c.body);
        CHECK_THROWS_AS(load_instance(path), IoError);
        std::remove(path.c_str());
    }
}

TEST_CASE("coupling upper bound") {
    ProblemInstance k3 = gen_complete(3, WeightMode::AllAf, 0);
    CHECK(j_upper_bound(k3) == 0.5);
    ProblemInstance empty;
    empty.n = 4;
    empty.finalize();
    CHECK_THROWS_AS(j_upper_bound(empty), ValidationError);
}
