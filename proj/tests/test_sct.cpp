#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <termlab/sct.hpp>

#include "common.hpp"

using namespace termlab;
using testutil::corpus_path;
using testutil::corpus_program;
using testutil::inf;
using testutil::mat;

TEST_CASE("extraction reproduces the cascading-loop generators") {
    Program p4 = corpus_program("prog4.tl");
    MeasureBasis basis = parse_measures(p4, "w,x,y,z");
    CHECK(extract_matrix(p4, 1, basis) == read_matrix_file(corpus_path("p4_c1.mat")));
    CHECK(extract_matrix(p4, 2, basis) == read_matrix_file(corpus_path("p4_c2.mat")));
    CHECK(extract_matrix(p4, 3, basis) == read_matrix_file(corpus_path("p4_c3.mat")));
}

TEST_CASE("extraction on the two-variable basis") {
    Program p5 = corpus_program("prog5.tl");
    MeasureBasis basis = parse_measures(p5, "x,y");

    TropicalMatrix c1 = extract_matrix(p5, 1, basis);
    CHECK(c1 == read_matrix_file(corpus_path("p5_c1.mat")));

    // The second case reads as rows = pre-measure, columns = post-measure; the
    // published table lists the same data transposed.
    TropicalMatrix c2 = extract_matrix(p5, 2, basis);
    CHECK(c2 == mat({{inf, 1}, {-2, inf}}));
    TropicalMatrix c2_published = read_matrix_file(corpus_path("p5_c2_published.mat"));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(c2.at(i, j) == c2_published.at(j, i));
}

TEST_CASE("extraction on the three-function basis") {
    Program p5 = corpus_program("prog5.tl");
    MeasureBasis basis = parse_measures(p5, "x,y,x+y");
    CHECK(extract_matrix(p5, 1, basis) ==
          mat({{-1, 0, inf}, {inf, inf, inf}, {-2, -1, inf}}));
    CHECK(extract_matrix(p5, 2, basis) ==
          mat({{inf, 1, inf}, {-2, inf, inf}, {-3, 0, -1}}));
}

TEST_CASE("extraction handles inputs and division") {
    Program p4 = corpus_program("prog4.tl");
    // x is input-fed in case 1: its column must be all-infinite.
    TropicalMatrix c1 = extract_matrix(p4, 1, parse_measures(p4, "w,x,y,z"));
    for (int i = 0; i < 4; ++i) CHECK(c1.at(i, 1) == inf);

    Program nt = corpus_program("prog_not_transitive.tl");
    TropicalMatrix halve = extract_matrix(nt, 1, parse_measures(nt, "x"));
    CHECK(halve == mat({{-1}}));

    CHECK_THROWS_WITH_AS(extract_matrix(p4, 5, parse_measures(p4, "w")), "unknown case 5",
                         Error);
}

TEST_CASE("extracted matrices pass their own audit") {
    Program p4 = corpus_program("prog4.tl");
    MeasureBasis b4 = parse_measures(p4, "w,x,y,z");
    Box box4 = Box::uniform(4, 1, 8);
    for (int c = 1; c <= 3; ++c)
        CHECK_FALSE(audit_matrix(p4, c, b4, extract_matrix(p4, c, b4), box4, 3).has_value());

    Program p5 = corpus_program("prog5.tl");
    MeasureBasis b5 = parse_measures(p5, "x,y,x+y");
    Box box5 = Box::uniform(2, 1, 20);
    for (int c = 1; c <= 2; ++c)
        CHECK_FALSE(audit_matrix(p5, c, b5, extract_matrix(p5, c, b5), box5, 3).has_value());
}

TEST_CASE("every finite extracted entry is tight") {
    struct Setup {
        const char* name;
        std::string funcs;
        Box box;
    };
    const Setup setups[] = {
        {"prog4.tl", "w,x,y,z", Box::uniform(4, 1, 12)},
        {"prog5.tl", "x,y,x+y", Box::uniform(2, 1, 20)},
        {"prog5.tl", "x,y", Box::uniform(2, 1, 20)},
        {"prog_not_transitive.tl", "x", Box{{{1, 20}}}},
    };
    for (const Setup& s : setups) {
        Program p = corpus_program(s.name);
        MeasureBasis basis = parse_measures(p, s.funcs);
        for (int c = 1; c <= static_cast<int>(p.cases.size()); ++c) {
            TropicalMatrix m = extract_matrix(p, c, basis);
            for (int i = 0; i < m.n; ++i) {
                for (int j = 0; j < m.n; ++j) {
                    if (m.at(i, j) == kInf) continue;
                    TropicalMatrix weak = m;
                    weak.at(i, j) -= 1;
                    auto v = audit_matrix(p, c, basis, weak, s.box, 3);
                    CAPTURE(s.name);
                    CAPTURE(c);
                    CAPTURE(i);
                    CAPTURE(j);
                    REQUIRE(v.has_value());
                    CHECK(v->i == i);
                    CHECK(v->j == j);
                }
            }
        }
    }
}

TEST_CASE("the published three-function matrices audit as stated") {
    Program p5 = corpus_program("prog5.tl");
    MeasureBasis basis = parse_measures(p5, "x,y,x+y");

    TropicalMatrix d1 = read_matrix_file(corpus_path("p5_d1_published.mat"));
    auto v = audit_matrix(p5, 1, basis, d1, Box::uniform(2, 1, 50), 3);
    REQUIRE(v.has_value());
    CHECK(v->state == StateVector{3, 1});
    CHECK(v->inputs.empty());
    CHECK(v->i == 0);
    CHECK(v->j == 2);
    CHECK(v->entry == 1);
    CHECK(v->pre_value == 3);
    CHECK(v->post_value == 5);

    // The published second matrix is looser than the extracted one but sound.
    TropicalMatrix d2 = read_matrix_file(corpus_path("p5_d2_published.mat"));
    CHECK_FALSE(audit_matrix(p5, 2, basis, d2, Box::uniform(2, 1, 50), 3).has_value());
}

TEST_CASE("audit validates its arguments") {
    Program p5 = corpus_program("prog5.tl");
    MeasureBasis basis = parse_measures(p5, "x,y");
    TropicalMatrix wrong(3);
    CHECK_THROWS_WITH_AS(audit_matrix(p5, 1, basis, wrong, Box::uniform(2, 1, 5), 3),
                         "matrix dimension 3 does not match the 2-function basis", Error);
    CHECK_THROWS_WITH_AS(
        audit_matrix(p5, 1, basis, TropicalMatrix(2), Box::uniform(3, 1, 5), 3),
        "box has 3 dimensions, program has 2 variables", Error);
    CHECK_THROWS_AS(audit_matrix(p5, 7, basis, TropicalMatrix(2), Box::uniform(2, 1, 5), 3),
                    Error);
}

TEST_CASE("closure of the cascading-loop generators") {
    Program p4 = corpus_program("prog4.tl");
    MeasureBasis basis = parse_measures(p4, "w,x,y,z");
    std::vector<TropicalMatrix> gens;
    for (int c = 1; c <= 3; ++c) gens.push_back(extract_matrix(p4, c, basis));

    std::vector<TropicalMatrix> elems = closure(gens, 4);
    CHECK(elems.size() == 40);
    CHECK(std::is_sorted(elems.begin(), elems.end()));

    std::set<TropicalMatrix> pool(elems.begin(), elems.end());
    for (const TropicalMatrix& g : gens) CHECK(pool.count(clamp(g, 4)) == 1);
    for (const TropicalMatrix& a : elems) {
        CHECK(has_negative_diagonal(a));
        for (const TropicalMatrix& b : elems) {
            CHECK(pool.count(clamp(mul(a, b), 4)) == 1);
            CHECK(pool.count(clamp(mul(b, a), 4)) == 1);
        }
    }

    CHECK(closure(gens, 2).size() == 16);
}

TEST_CASE("criterion A decides the cascading loop") {
    Program p4 = corpus_program("prog4.tl");
    SctResult r = decide(p4, parse_measures(p4, "w,x,y,z"), 4, Criterion::A);
    CHECK(r.verdict == Verdict::Terminates);
    CHECK(r.cert.closure_elems.size() == 40);
    CHECK_FALSE(r.cert.failing_element.has_value());
    CHECK_FALSE(r.cert.generators_clamped);
    CHECK(r.cert.column_condition_all);
    for (size_t i = 0; i < r.cert.witnesses.size(); ++i) {
        int w = r.cert.witnesses[i];
        REQUIRE(w >= 0);
        CHECK(r.cert.closure_elems[i].at(w, w) < 0);
    }
}

TEST_CASE("criterion A is stuck on the two-variable basis but B is not") {
    Program p5 = corpus_program("prog5.tl");
    MeasureBasis basis = parse_measures(p5, "x,y");

    SctResult a = decide(p5, basis, 6, Criterion::A);
    CHECK(a.verdict == Verdict::Unknown);
    CHECK(a.cert.closure_elems.size() == 37);
    REQUIRE(a.cert.failing_element.has_value());
    CHECK(*a.cert.failing_element == 21);
    CHECK(a.cert.closure_elems[21] == mat({{inf, -6}, {-6, inf}}));
    CHECK(a.cert.witnesses[21] == -1);

    SctResult b = decide(p5, basis, 6, Criterion::B);
    CHECK(b.verdict == Verdict::Terminates);
    CHECK_FALSE(b.cert.failing_element.has_value());
    CHECK(b.cert.closure_elems.size() == 37);
    // The element without a negative diagonal needs exactly one squaring.
    CHECK(b.cert.closure_elems[21] == mat({{inf, -6}, {-6, inf}}));
    CHECK(b.cert.witnesses[21] == 2);
    for (int w : b.cert.witnesses) CHECK(w >= 1);
}

TEST_CASE("criterion B subsumes criterion A on the corpus") {
    struct Setup {
        const char* name;
        std::string funcs;
    };
    const Setup setups[] = {
        {"prog4.tl", "w,x,y,z"},
        {"prog5.tl", "x,y,x+y"},
        {"prog3.tl", "x+y+z"},
        {"prog_not_transitive.tl", "x"},
    };
    for (const Setup& s : setups) {
        Program p = corpus_program(s.name);
        MeasureBasis basis = parse_measures(p, s.funcs);
        SctResult a = decide(p, basis, 8, Criterion::A);
        SctResult b = decide(p, basis, 8, Criterion::B);
        CAPTURE(s.name);
        if (a.verdict == Verdict::Terminates) CHECK(b.verdict == Verdict::Terminates);
    }
}

TEST_CASE("whole-closure witness agreement on random generators") {
    // Dimension is capped at 2 so the clamped closure stays within the
    // 6^4 distinct matrices possible at clamp 2.
    std::mt19937_64 rng(550123);
    std::uniform_int_distribution<int> dim(1, 2);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<long long> val(-3, 3);
    for (int iter = 0; iter < 100; ++iter) {
        int n = dim(rng);
        std::vector<TropicalMatrix> gens(2, TropicalMatrix(n));
        for (TropicalMatrix& g : gens)
            for (long long& v : g.e) v = kind(rng) == 0 ? kInf : val(rng);
        std::vector<TropicalMatrix> elems = closure(gens, 2);
        CHECK(!elems.empty());
        CHECK(elems.size() <= 1296);
        for (const TropicalMatrix& m : elems) {
            if (has_negative_diagonal(m)) CHECK(power_diag_negative(m, 2) == 1);
        }
    }
}

TEST_CASE("oversized generator entries are clamped at ingestion") {
    Program p2 = corpus_program("prog2.tl");
    SctResult r = decide(p2, parse_measures(p2, "x"), 8, Criterion::A);
    CHECK(r.cert.generators_clamped);
    CHECK(r.verdict == Verdict::Unknown);
    REQUIRE(r.cert.failing_element.has_value());
}
