#include "termlab/ramsey.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "termlab/error.hpp"

namespace termlab {

namespace {

// Slot of pair {i, j} with i < j: pairs are grouped by their larger endpoint.
size_t slot(int i, int j) {
    return static_cast<size_t>(j - 1) * (j - 2) / 2 + static_cast<size_t>(i - 1);
}

void check_pair(const EdgeColoring& g, int i, int j) {
    if (i < 1 || j <= i || j > g.n)
        throw Error("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") is not a pair of distinct vertices in 1.." + std::to_string(g.n));
}

}  // namespace

EdgeColoring::EdgeColoring(int n, int c) : n(n), c(c) {
    if (n < 1) throw Error("coloring needs at least one vertex");
    if (c < 1) throw Error("coloring needs at least one color");
    colors.assign(static_cast<size_t>(n) * (n - 1) / 2, 1);
}

int& EdgeColoring::at(int i, int j) {
    check_pair(*this, i, j);
    return colors[slot(i, j)];
}

int EdgeColoring::at(int i, int j) const {
    check_pair(*this, i, j);
    return colors[slot(i, j)];
}

std::string format_coloring(const EdgeColoring& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.c << '\n';
    for (int i = 1; i < g.n; ++i)
        for (int j = i + 1; j <= g.n; ++j) out << i << ' ' << j << ' ' << g.at(i, j) << '\n';
    return out.str();
}

EdgeColoring parse_coloring(const std::string& text) {
    std::istringstream in(text);
    long long n = 0, c = 0;
    if (!(in >> n >> c)) throw Error("coloring header must be two integers: n c");
    if (n < 1 || n > 100000) throw Error("vertex count out of range: " + std::to_string(n));
    if (c < 1) throw Error("color count out of range: " + std::to_string(c));
    EdgeColoring g(static_cast<int>(n), static_cast<int>(c));
    std::vector<bool> seen(g.colors.size(), false);
    long long i = 0, j = 0, q = 0;
    while (in >> i >> j >> q) {
        if (i < 1 || j <= i || j > n)
            throw Error("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not a pair i < j of vertices in 1.." + std::to_string(n));
        if (q < 1 || q > c)
            throw Error("color " + std::to_string(q) + " of edge (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") is outside 1.." + std::to_string(c));
        size_t s = slot(static_cast<int>(i), static_cast<int>(j));
        if (seen[s])
            throw Error("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is listed twice");
        seen[s] = true;
        g.colors[s] = static_cast<int>(q);
    }
    if (!in.eof()) throw Error("malformed edge line: expected three integers i j color");
    for (int a = 1; a < g.n; ++a)
        for (int b = a + 1; b <= g.n; ++b)
            if (!seen[slot(a, b)])
                throw Error("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") is missing");
    return g;
}

EdgeColoring read_coloring_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_coloring(buf.str());
}

std::optional<TransitivityViolation> transitivity_violation(const EdgeColoring& g) {
    for (int i = 1; i <= g.n - 2; ++i)
        for (int j = i + 1; j <= g.n - 1; ++j)
            for (int k = j + 1; k <= g.n; ++k)
                if (g.at(i, j) == g.at(j, k) && g.at(i, k) != g.at(i, j))
                    return TransitivityViolation{i, j, k};
    return std::nullopt;
}

bool is_transitive(const EdgeColoring& g) { return !transitivity_violation(g).has_value(); }

MipResult longest_mip(const EdgeColoring& g) {
    // len[v][q] = longest color-q increasing path ending at v; pred[v][q] is
    // the least predecessor realizing it.
    std::vector<std::vector<int>> len(g.n + 1, std::vector<int>(g.c + 1, 1));
    std::vector<std::vector<int>> pred(g.n + 1, std::vector<int>(g.c + 1, 0));
    for (int v = 2; v <= g.n; ++v)
        for (int u = 1; u < v; ++u) {
            int q = g.at(u, v);
            if (len[u][q] + 1 > len[v][q]) {
                len[v][q] = len[u][q] + 1;
                pred[v][q] = u;
            }
        }

    int best_v = 1, best_q = 1;
    for (int v = 1; v <= g.n; ++v)
        for (int q = 1; q <= g.c; ++q) {
            int l = len[v][q];
            if (l > len[best_v][best_q] || (l == len[best_v][best_q] && q < best_q))
                best_v = v, best_q = q;
        }

    MipResult r;
    r.color = best_q;
    for (int v = best_v; v != 0; v = pred[v][best_q]) r.path.push_back(v);
    std::reverse(r.path.begin(), r.path.end());
    r.vectors.resize(g.n);
    for (int v = 1; v <= g.n; ++v)
        r.vectors[v - 1].assign(len[v].begin() + 1, len[v].end());
    return r;
}

long long trt_size(int k, int c) {
    if (k < 2) throw Error("path length k must be at least 2");
    if (c < 1) throw Error("color count c must be at least 1");
    long long acc = 1;
    for (int i = 0; i < c; ++i)
        if (__builtin_mul_overflow(acc, static_cast<long long>(k - 1), &acc))
            throw Error("trt_size(" + std::to_string(k) + ", " + std::to_string(c) +
                        ") overflows");
    if (__builtin_add_overflow(acc, 1LL, &acc))
        throw Error("trt_size(" + std::to_string(k) + ", " + std::to_string(c) + ") overflows");
    return acc;
}

EdgeColoring build_extremal(int k, int c) {
    long long n = trt_size(k, c) - 1;
    if (n < 1) throw Error("extremal coloring is empty for k = " + std::to_string(k));
    if (n > 20000)
        throw Error("extremal coloring on " + std::to_string(n) + " vertices is too large");
    if (c == 1) return EdgeColoring(static_cast<int>(n), 1);

    EdgeColoring outer = build_extremal(k, c - 1);
    EdgeColoring g(static_cast<int>(n), c);
    // Contiguous blocks of k-1 vertices: inside a block the fresh color c,
    // across blocks the outer coloring on block indices.
    auto block = [&](int v) { return (v - 1) / (k - 1) + 1; };
    for (int i = 1; i < g.n; ++i)
        for (int j = i + 1; j <= g.n; ++j)
            g.at(i, j) = block(i) == block(j) ? c : outer.at(block(i), block(j));
    return g;
}

std::optional<HomogeneousSet> find_homogeneous(const EdgeColoring& g, int k) {
    if (k < 2) throw Error("homogeneous set size must be at least 2");
    if (k > g.n) return std::nullopt;

    long long subsets = 1;
    for (int i = 1; i <= k; ++i) {
        subsets = subsets * (g.n - k + i) / i;
        if (subsets > 2'000'000'000LL) break;
    }
    long long pairs = static_cast<long long>(k) * (k - 1) / 2;
    if (subsets > 100'000'000LL / pairs)
        throw Error("homogeneous search over " + std::to_string(g.n) + " choose " +
                    std::to_string(k) + " subsets exceeds the work budget");

    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i + 1;
    for (;;) {
        int color = g.at(pick[0], pick[1]);
        bool homog = true;
        for (int a = 0; a < k && homog; ++a)
            for (int b = a + 1; b < k; ++b)
                if (g.at(pick[a], pick[b]) != color) {
                    homog = false;
                    break;
                }
        if (homog) return HomogeneousSet{pick, color};

        int i = k - 1;
        while (i >= 0 && pick[i] == g.n - (k - 1 - i)) --i;
        if (i < 0) return std::nullopt;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

MonotoneResult monotone_subsequence(const std::vector<long long>& seq, int k) {
    if (k < 1) throw Error("subsequence length must be at least 1");
    if (seq.empty()) throw Error("sequence is empty");
    std::set<long long> distinct(seq.begin(), seq.end());
    if (distinct.size() != seq.size()) throw Error("sequence has duplicate values");

    int n = static_cast<int>(seq.size());
    EdgeColoring g(n, 2);
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j) g.at(i, j) = seq[i - 1] < seq[j - 1] ? 1 : 2;

    MipResult mip = longest_mip(g);
    if (static_cast<int>(mip.path.size()) > k) mip.path.resize(k);

    MonotoneResult r;
    r.increasing = mip.color == 1;
    for (int v : mip.path) r.values.push_back(seq[v - 1]);
    return r;
}

}  // namespace termlab
