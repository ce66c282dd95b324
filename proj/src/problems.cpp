#include "ssbm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ssbm/errors.hpp"

namespace ssbm {

double ProblemInstance::weight_sum() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.w;
    return s;
}

void ProblemInstance::finalize() {
    if (n < 1) throw ValidationError("instance needs at least one node");
    for (auto& e : edges) {
        if (e.i == e.j) throw ValidationError("self-loop on node " + std::to_string(e.i));
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw ValidationError("edge endpoint out of range");
        if (e.w == 0.0) throw ValidationError("zero edge weight is a meaningless coupling");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
            throw ValidationError("duplicate edge (" + std::to_string(edges[k].i + 1) +
                                  "," + std::to_string(edges[k].j + 1) + ")");

    af.assign(n, {});
    f.assign(n, {});
    bool unit = true;
    for (const auto& e : edges) {
        auto& bucket_i = e.w > 0 ? af[e.i] : f[e.i];
        auto& bucket_j = e.w > 0 ? af[e.j] : f[e.j];
        bucket_i.push_back(e.j);
        bucket_j.push_back(e.i);
        if (std::abs(e.w) != 1.0) unit = false;
    }

    dense = unit && n >= 2 &&
            edges.size() == static_cast<std::size_t>(n) * (n - 1) / 2;
    af_bits.clear();
    words_per_row = 0;
    if (dense) {
        words_per_row = (n + 63) / 64;
        af_bits.assign(static_cast<std::size_t>(n) * words_per_row, 0);
        for (const auto& e : edges) {
            if (e.w > 0) {
                af_bits[static_cast<std::size_t>(e.i) * words_per_row + e.j / 64] |=
                    std::uint64_t(1) << (e.j % 64);
                af_bits[static_cast<std::size_t>(e.j) * words_per_row + e.i / 64] |=
                    std::uint64_t(1) << (e.i % 64);
            }
        }
    }
}

ProblemInstance gen_circulant(int n, const std::vector<int>& offsets, int sign) {
    if (n < 3) throw ValidationError("circulant graph needs n >= 3");
    if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
    if (offsets.empty()) throw ValidationError("need at least one offset");
    for (int o : offsets)
        if (o < 1 || 2 * o > n)
            throw ValidationError("offset " + std::to_string(o) +
                                  " out of range [1, n/2]");
    std::set<std::pair<int, int>> seen;
    ProblemInstance inst;
    inst.n = n;
    for (int i = 0; i < n; ++i) {
        for (int o : offsets) {
            int j = (i + o) % n;
            auto e = std::minmax(i, j);
            if (seen.insert({e.first, e.second}).second)
                inst.edges.push_back({e.first, e.second, double(sign)});
        }
    }
    inst.finalize();
    return inst;
}

ProblemInstance gen_complete(int n, WeightMode mode, std::uint64_t seed) {
    if (n < 2) throw ValidationError("complete graph needs n >= 2");
    ProblemInstance inst;
    inst.n = n;
    inst.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    std::mt19937_64 eng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double w = 1.0;
            if (mode == WeightMode::RandomPm1) w = (eng() & 1) ? 1.0 : -1.0;
            inst.edges.push_back({i, j, w});
        }
    }
    inst.finalize();
    return inst;
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    ProblemInstance inst;
    int m = -1;
    int line_no = 0;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!header_seen) {
            if (ls >> inst.n >> m) {
                header_seen = true;
                std::string trail;
                if (ls >> trail)
                    throw IoError(path + ":" + std::to_string(line_no) +
                                  ": trailing tokens after header");
            } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
                throw IoError(path + ":" + std::to_string(line_no) + ": expected \"N M\" header");
            }
            continue;
        }
        int i, j;
        double w;
        if (ls >> i >> j >> w) {
            if (i < 1 || j < 1 || i > inst.n || j > inst.n)
                throw IoError(path + ":" + std::to_string(line_no) +
                              ": node index out of range 1.." + std::to_string(inst.n));
            if (i >= j)
                throw IoError(path + ":" + std::to_string(line_no) + ": edges require i < j");
            if (w == 0.0)
                throw IoError(path + ":" + std::to_string(line_no) + ": zero weight");
            inst.edges.push_back({i - 1, j - 1, w});
        } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed edge line");
        }
    }
    if (!header_seen) throw IoError(path + ": missing \"N M\" header");
    if (m != int(inst.edges.size()))
        throw IoError(path + ": header claims " + std::to_string(m) + " edges, found " +
                      std::to_string(inst.edges.size()));
    try {
        inst.finalize();
    } catch (const ValidationError& e) {
        throw IoError(path + ": " + e.what());
    }
    return inst;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << inst.n << ' ' << inst.edges.size() << '\n';
    out.precision(17);
    for (const auto& e : inst.edges) {
        out << (e.i + 1) << ' ' << (e.j + 1) << ' ';
        if (e.w == static_cast<long long>(e.w))
            out << static_cast<long long>(e.w);
        else
            out << e.w;
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

double j_upper_bound(const ProblemInstance& inst) {
    if (inst.edges.empty()) throw ValidationError("edgeless instance has no coupling bound");
    int dmax = 0;
    for (int v = 0; v < inst.n; ++v) dmax = std::max(dmax, inst.degree(v));
    return 1.0 / dmax;
}

}  // namespace ssbm
