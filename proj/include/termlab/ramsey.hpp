#pragma once

#include <optional>
#include <string>
#include <vector>

namespace termlab {

// Edge coloring of the complete graph on vertices 1..n with colors 1..c,
// stored triangularly (one slot per unordered pair).
struct EdgeColoring {
    int n = 0;
    int c = 0;
    std::vector<int> colors;

    EdgeColoring() = default;
    EdgeColoring(int n, int c);

    int& at(int i, int j);  // requires 1 <= i < j <= n
    int at(int i, int j) const;
};

std::string format_coloring(const EdgeColoring& g);
EdgeColoring parse_coloring(const std::string& text);
EdgeColoring read_coloring_file(const std::string& path);

// i < j < k with color(i,j) == color(j,k) but color(i,k) different.
struct TransitivityViolation {
    int i = 0, j = 0, k = 0;
};

std::optional<TransitivityViolation> transitivity_violation(const EdgeColoring& g);
bool is_transitive(const EdgeColoring& g);

// Longest monochromatic increasing path, plus the table underlying the bound
// argument: vectors[v-1][q-1] = length of the longest color-q path ending at v.
struct MipResult {
    std::vector<int> path;
    int color = 1;
    std::vector<std::vector<int>> vectors;
};

MipResult longest_mip(const EdgeColoring& g);

// Least n forcing a monochromatic increasing path on k vertices in every
// c-coloring of K_n: (k-1)^c + 1.
long long trt_size(int k, int c);

// Transitive c-coloring of K_{(k-1)^c} with no monochromatic increasing path
// on k vertices, witnessing that trt_size is tight.
EdgeColoring build_extremal(int k, int c);

struct HomogeneousSet {
    std::vector<int> vertices;
    int color = 1;
};

// Lexicographically least k-subset whose pairs all carry one color.
std::optional<HomogeneousSet> find_homogeneous(const EdgeColoring& g, int k);

struct MonotoneResult {
    std::vector<long long> values;
    bool increasing = true;
};

// Monotone subsequence of k values from a duplicate-free sequence, found via
// the two-coloring of index pairs by comparison outcome. When no subsequence
// of length k exists the longest one found is returned.
MonotoneResult monotone_subsequence(const std::vector<long long>& seq, int k);

}  // namespace termlab
