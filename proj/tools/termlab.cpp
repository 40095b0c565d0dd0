#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termlab/interp.hpp"
#include "termlab/prog.hpp"
#include "termlab/ramsey.hpp"
#include "termlab/ranking.hpp"
#include "termlab/report.hpp"
#include "termlab/sct.hpp"
#include "termlab/transinv.hpp"
#include "termlab/tropical.hpp"

using namespace termlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Program load_program(const std::string& path) {
    try {
        return parse_program(slurp(path));
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    }
}

std::vector<long long> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<long long> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        size_t a = piece.find_first_not_of(" \t");
        if (a == std::string::npos) throw Error(what + " has an empty entry: \"" + text + "\"");
        size_t b = piece.find_last_not_of(" \t");
        piece = piece.substr(a, b - a + 1);
        try {
            size_t used = 0;
            long long v = std::stoll(piece, &used);
            if (used != piece.size()) throw std::invalid_argument(piece);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(what + " entry is not an integer: \"" + piece + "\"");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Box parse_box(const std::string& spec, size_t dims) {
    size_t colon = spec.find(':');
    if (colon == std::string::npos) throw Error("box must be LO:HI, got \"" + spec + "\"");
    long long lo = 0, hi = 0;
    try {
        size_t used = 0;
        lo = std::stoll(spec.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument(spec);
        std::string rest = spec.substr(colon + 1);
        hi = std::stoll(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
        throw Error("box must be LO:HI with integer bounds, got \"" + spec + "\"");
    }
    if (lo > hi) throw Error("box lower bound exceeds upper bound: " + spec);
    return Box::uniform(dims, lo, hi);
}

std::vector<Choice> parse_script(const std::string& text) {
    std::vector<Choice> steps;
    size_t start = 0;
    while (start <= text.size()) {
        size_t semi = text.find(';', start);
        std::string piece =
            semi == std::string::npos ? text.substr(start) : text.substr(start, semi - start);
        if (piece.find_first_not_of(" \t") == std::string::npos)
            throw Error("script has an empty step: \"" + text + "\"");
        Choice step;
        size_t colon = piece.find(':');
        std::string head = colon == std::string::npos ? piece : piece.substr(0, colon);
        std::vector<long long> ids = parse_int_list(head, "script case");
        if (ids.size() != 1) throw Error("script step needs one case id: \"" + piece + "\"");
        step.first = static_cast<int>(ids[0]);
        if (colon != std::string::npos &&
            piece.find_first_not_of(" \t", colon + 1) != std::string::npos)
            step.second = parse_int_list(piece.substr(colon + 1), "script input");
        steps.push_back(std::move(step));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return steps;
}

std::string tuple_str(const StateVector& s) {
    std::string out = "(";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string box_str(const Box& box) {
    if (box.dims.empty()) return "[]";
    bool same = true;
    for (const auto& d : box.dims) same = same && d == box.dims.front();
    if (same)
        return "[" + std::to_string(box.dims.front().first) + ", " +
               std::to_string(box.dims.front().second) + "]^" + std::to_string(box.dims.size());
    std::string out;
    for (size_t i = 0; i < box.dims.size(); ++i) {
        if (i) out += " x ";
        out += "[" + std::to_string(box.dims[i].first) + ", " +
               std::to_string(box.dims[i].second) + "]";
    }
    return out;
}

struct Emitter {
    std::string json_path;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    int finish(Report& report, int code) const {
        report.timing_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (!json_path.empty()) write_report(report, json_path);
        return code;
    }
};

struct AnalyzeOpts {
    std::string file;
    std::string method = "sct";
    std::string functions;
    std::string rank;
    std::string invariant;
    std::string box = "-50:50";
    long long clamp = 8;
    std::string criterion = "A";
    long long input_cap = 3;
    long long pair_budget = 5'000'000;
    bool dump = false;
};

int run_analyze_sct(const Program& p, const AnalyzeOpts& o, Report& report, const Emitter& em) {
    MeasureBasis basis = o.functions.empty() ? default_basis(p) : parse_measures(p, o.functions);
    Criterion crit = o.criterion == "B" ? Criterion::B : Criterion::A;
    SctResult r = decide(p, basis, o.clamp, crit);

    std::cout << "basis: " << join(r.cert.basis.names, ", ") << '\n';
    std::cout << "clamp: " << o.clamp << '\n';
    std::cout << "criterion: " << o.criterion << '\n';
    std::cout << "generators: " << r.cert.generators.size() << '\n';
    std::cout << "closure: " << r.cert.closure_elems.size() << " elements\n";
    std::cout << "column condition: "
              << (r.cert.column_condition_all ? "all elements" : "not all elements") << '\n';

    if (r.cert.generators_clamped)
        report.diagnostics.push_back("some generator entries were clamped at ingestion");
    if (r.cert.failing_element) {
        report.diagnostics.push_back("closure element " +
                                     std::to_string(*r.cert.failing_element + 1) +
                                     " has no witness");
        std::cout << "failing element " << *r.cert.failing_element + 1 << ":\n"
                  << format_matrix(r.cert.closure_elems[*r.cert.failing_element]);
    }
    if (o.dump) {
        for (size_t i = 0; i < r.cert.closure_elems.size(); ++i) {
            int w = r.cert.witnesses[i];
            std::cout << "element " << i + 1 << ": ";
            if (w < 0)
                std::cout << "no witness\n";
            else if (crit == Criterion::A)
                std::cout << "negative diagonal at " << w + 1 << '\n';
            else
                std::cout << "negative diagonal at power " << w << '\n';
            std::cout << format_matrix(r.cert.closure_elems[i]);
        }
    }
    for (const std::string& d : report.diagnostics) std::cout << "note: " << d << '\n';
    std::cout << "verdict: " << verdict_name(r.verdict) << '\n';

    Json cert;
    cert["basis"] = r.cert.basis.names;
    cert["clamp"] = o.clamp;
    cert["criterion"] = o.criterion;
    Json gens = Json::array();
    for (const TropicalMatrix& g : r.cert.generators) gens.push_back(matrix_json(g));
    cert["generators"] = std::move(gens);
    cert["generators_clamped"] = r.cert.generators_clamped;
    cert["closure_size"] = r.cert.closure_elems.size();
    Json elems = Json::array();
    for (const TropicalMatrix& m : r.cert.closure_elems) elems.push_back(matrix_json(m));
    cert["closure"] = std::move(elems);
    cert["witnesses"] = r.cert.witnesses;
    cert["failing_element"] =
        r.cert.failing_element ? Json(*r.cert.failing_element + 1) : Json(nullptr);
    cert["column_condition_all"] = r.cert.column_condition_all;
    report.certificate = std::move(cert);
    report.verdict = verdict_name(r.verdict);
    return em.finish(report, r.verdict == Verdict::Terminates ? 0 : 1);
}

int run_analyze_ranking(const Program& p, const AnalyzeOpts& o, Report& report,
                        const Emitter& em) {
    if (o.rank.empty()) throw Error("--method ranking requires --rank");
    RankingSpec spec = parse_ranking(p, o.rank);
    RankingResult r = verify_ranking(p, spec);

    std::cout << "rank: " << join(spec.names, ", ") << '\n';
    Json cases = Json::array();
    for (const CaseJustification& cj : r.cases) {
        std::vector<std::string> changes;
        for (ComponentChange ch : cj.changes) changes.emplace_back(component_change_name(ch));
        std::cout << "case " << cj.case_id << ": changes = " << join(changes, ", ")
                  << "; lead = " << (cj.lead ? std::to_string(*cj.lead + 1) : "none") << '\n';
        Json jc;
        jc["case"] = cj.case_id;
        jc["changes"] = changes;
        jc["lead"] = cj.lead ? Json(*cj.lead + 1) : Json(nullptr);
        cases.push_back(std::move(jc));
    }
    if (r.failing_case)
        report.diagnostics.push_back("case " + std::to_string(*r.failing_case) +
                                     " has no lead component");
    for (const std::string& d : report.diagnostics) std::cout << "note: " << d << '\n';
    std::cout << "verdict: " << verdict_name(r.verdict) << '\n';

    Json cert;
    cert["rank"] = spec.names;
    cert["cases"] = std::move(cases);
    cert["failing_case"] = r.failing_case ? Json(*r.failing_case) : Json(nullptr);
    report.certificate = std::move(cert);
    report.verdict = verdict_name(r.verdict);
    return em.finish(report, r.verdict == Verdict::Terminates ? 0 : 1);
}

int run_analyze_transinv(const Program& p, const AnalyzeOpts& o, Report& report,
                         const Emitter& em) {
    if (o.invariant.empty()) throw Error("--method transinv requires --invariant");
    InvariantCandidate cand;
    try {
        cand = parse_invariant(p, slurp(o.invariant));
    } catch (const ParseError& e) {
        throw Error(o.invariant + ":" + e.what());
    }
    Box box = parse_box(o.box, p.vars.size());

    std::cout << "invariant: " << o.invariant << " (" << cand.disjuncts.size()
              << " disjuncts)\n";
    std::cout << "box: " << box_str(box) << '\n';

    DwfResult dwf = check_dwf(cand, box);
    Json jdwf;
    jdwf["pass"] = dwf.pass;
    jdwf["exact"] = dwf.exact;
    if (dwf.pass) {
        std::cout << "well-founded: yes (" << (dwf.exact ? "exact" : "on box") << ")\n";
        jdwf["violation"] = nullptr;
    } else {
        const DwfViolation& v = *dwf.violation;
        std::string reason =
            v.nonneg_failed ? "rank negative before the step" : "rank does not decrease";
        std::cout << "well-founded: violation in disjunct " << v.disjunct + 1
                  << " at pre=" << tuple_str(v.pre) << ", post=" << tuple_str(v.post) << ": "
                  << reason << '\n';
        Json jv;
        jv["disjunct"] = v.disjunct + 1;
        jv["pre"] = state_json(v.pre);
        jv["post"] = state_json(v.post);
        jv["reason"] = reason;
        jdwf["violation"] = std::move(jv);
    }

    TransInvResult inv = check_transition_invariant(p, cand, box, o.input_cap, o.pair_budget);
    Json jinv;
    jinv["pass"] = inv.pass;
    jinv["pairs"] = inv.pairs;
    if (inv.pass) {
        std::cout << "transition invariant: holds (" << inv.pairs << " pairs)\n";
        jinv["counterexample"] = nullptr;
    } else {
        std::cout << "transition invariant: uncovered pair pre="
                  << tuple_str(inv.counterexample->pre)
                  << ", post=" << tuple_str(inv.counterexample->post) << '\n';
        Json jc;
        jc["pre"] = state_json(inv.counterexample->pre);
        jc["post"] = state_json(inv.counterexample->post);
        jinv["counterexample"] = std::move(jc);
    }

    Verdict verdict = dwf.pass && inv.pass ? Verdict::Terminates : Verdict::Unknown;
    std::cout << "verdict: " << verdict_name(verdict) << '\n';

    Json cert;
    cert["disjuncts"] = cand.disjuncts.size();
    std::vector<std::string> ranks;
    for (const Disjunct& d : cand.disjuncts) ranks.push_back(print_affine(p, d.rank));
    cert["ranks"] = ranks;
    cert["well_founded"] = std::move(jdwf);
    cert["transition_invariant"] = std::move(jinv);
    report.certificate = std::move(cert);
    report.checked_domain = box_domain(box, o.input_cap);
    report.verdict = verdict_name(verdict);
    return em.finish(report, verdict == Verdict::Terminates ? 0 : 1);
}

int run_analyze(const AnalyzeOpts& o, const Emitter& em) {
    Program p = load_program(o.file);
    Report report;
    report.program = p.name;
    report.method = o.method;
    std::cout << "program: " << p.name << '\n';
    std::cout << "method: " << o.method << '\n';
    if (o.method == "sct") return run_analyze_sct(p, o, report, em);
    if (o.method == "ranking") return run_analyze_ranking(p, o, report, em);
    return run_analyze_transinv(p, o, report, em);
}

struct SimulateOpts {
    std::string file;
    std::string start;
    std::string script;
    std::uint64_t seed = 0;
    long long max_steps = 100;
    long long input_cap = 3;
};

int run_simulate(const SimulateOpts& o, const Emitter& em) {
    Program p = load_program(o.file);
    StateVector start = parse_int_list(o.start, "start state");
    Strategy strat;
    if (!o.script.empty())
        strat = Scripted{parse_script(o.script)};
    else
        strat = SeededRandom{o.seed, o.input_cap};
    Trace t = run(p, start, strat, static_cast<int>(o.max_steps));

    for (const StateVector& s : t.states) std::cout << tuple_str(s) << '\n';
    if (t.terminated)
        std::cout << "terminated after " << t.choices.size() << " steps\n";
    else
        std::cout << "running after " << t.choices.size() << " steps (guard still holds)\n";

    Report report;
    report.program = p.name;
    report.method = "simulate";
    Json cert;
    cert["trace"] = trace_json(t);
    cert["steps"] = t.choices.size();
    report.certificate = std::move(cert);
    return em.finish(report, 0);
}

struct SegmentsOpts {
    std::string file;
    std::string box = "-50:50";
    long long max_len = 6;
    long long input_cap = 3;
    bool print = false;
};

int run_segments(const SegmentsOpts& o, const Emitter& em) {
    Program p = load_program(o.file);
    Box box = parse_box(o.box, p.vars.size());

    long long count = 0;
    std::vector<std::string> lines;
    for_each_segment(p, box, static_cast<int>(o.max_len), o.input_cap, [&](const Trace& t) {
        ++count;
        if (!o.print) return;
        lines.push_back("segment " + std::to_string(count) + ":");
        for (const StateVector& s : t.states) lines.push_back(tuple_str(s));
    });
    std::cout << "segments: " << count << '\n';
    for (const std::string& line : lines) std::cout << line << '\n';

    Report report;
    report.program = p.name;
    report.method = "segments";
    Json cert;
    cert["count"] = count;
    cert["max_len"] = o.max_len;
    report.certificate = std::move(cert);
    report.checked_domain = box_domain(box, o.input_cap);
    return em.finish(report, 0);
}

struct AuditOpts {
    std::string file;
    std::string functions;
    std::string matrix;
    std::string box = "-50:50";
    long long case_id = 1;
    long long input_cap = 3;
};

int run_audit(const AuditOpts& o, const Emitter& em) {
    Program p = load_program(o.file);
    MeasureBasis basis = o.functions.empty() ? default_basis(p) : parse_measures(p, o.functions);
    validate_basis(p, basis);
    TropicalMatrix m = o.matrix.empty() ? extract_matrix(p, static_cast<int>(o.case_id), basis)
                                        : read_matrix_file(o.matrix);
    if (m.n != static_cast<int>(basis.funcs.size()))
        throw Error("matrix is " + std::to_string(m.n) + "x" + std::to_string(m.n) +
                    " but the basis has " + std::to_string(basis.funcs.size()) + " functions");
    Box box = parse_box(o.box, p.vars.size());

    std::cout << "program: " << p.name << '\n';
    std::cout << "case: " << o.case_id << '\n';
    std::cout << "basis: " << join(basis.names, ", ") << '\n';
    std::cout << "matrix: " << (o.matrix.empty() ? "extracted" : o.matrix) << '\n';
    std::cout << "box: " << box_str(box) << '\n';

    auto violation = audit_matrix(p, static_cast<int>(o.case_id), basis, m, box, o.input_cap);

    Report report;
    report.program = p.name;
    report.method = "sct";
    report.checked_domain = box_domain(box, o.input_cap);
    Json cert;
    cert["case"] = o.case_id;
    cert["basis"] = basis.names;
    cert["matrix"] = matrix_json(m);
    cert["source"] = o.matrix.empty() ? "extracted" : o.matrix;
    if (!violation) {
        std::cout << "audit: pass\n";
        cert["violation"] = nullptr;
        report.certificate = std::move(cert);
        return em.finish(report, 0);
    }
    const AuditViolation& v = *violation;
    std::cout << "audit: violation\n";
    std::cout << "entry (" << v.i + 1 << ", " << v.j + 1 << ") = " << v.entry << " at state "
              << tuple_str(v.state) << ", inputs " << tuple_str(v.inputs) << ": post("
              << basis.names[v.j] << ") = " << v.post_value << " > pre(" << basis.names[v.i]
              << ") + " << v.entry << " = " << v.pre_value + v.entry << '\n';
    Json jv;
    jv["state"] = state_json(v.state);
    jv["inputs"] = state_json(v.inputs);
    jv["entry"] = Json::array({v.i + 1, v.j + 1});
    jv["bound"] = v.entry;
    jv["pre_value"] = v.pre_value;
    jv["post_value"] = v.post_value;
    cert["violation"] = std::move(jv);
    report.certificate = std::move(cert);
    return em.finish(report, 1);
}

struct MatrixOpts {
    std::vector<std::string> files;
    std::string file;
    long long power = 1;
    long long clamp_k = 0;  // 0 = exact
    bool dump = false;
};

int run_matrix_mul(const MatrixOpts& o, const Emitter& em) {
    TropicalMatrix acc = read_matrix_file(o.files.front());
    if (o.clamp_k > 0) acc = clamp(acc, o.clamp_k);
    for (size_t i = 1; i < o.files.size(); ++i) {
        acc = mul(acc, read_matrix_file(o.files[i]));
        if (o.clamp_k > 0) acc = clamp(acc, o.clamp_k);
    }
    std::cout << format_matrix(acc);

    Report report;
    report.method = "matrix";
    Json cert;
    cert["op"] = "mul";
    cert["result"] = matrix_json(acc);
    report.certificate = std::move(cert);
    return em.finish(report, 0);
}

int run_matrix_pow(const MatrixOpts& o, const Emitter& em) {
    TropicalMatrix base = read_matrix_file(o.file);
    if (o.clamp_k > 0) base = clamp(base, o.clamp_k);
    TropicalMatrix acc = base;
    for (long long i = 1; i < o.power; ++i) {
        acc = mul(acc, base);
        if (o.clamp_k > 0) acc = clamp(acc, o.clamp_k);
    }
    std::cout << format_matrix(acc);

    Report report;
    report.method = "matrix";
    Json cert;
    cert["op"] = "pow";
    cert["power"] = o.power;
    cert["result"] = matrix_json(acc);
    report.certificate = std::move(cert);
    return em.finish(report, 0);
}

int run_matrix_closure(const MatrixOpts& o, const Emitter& em) {
    std::vector<TropicalMatrix> gens;
    for (const std::string& f : o.files) gens.push_back(read_matrix_file(f));
    long long k = o.clamp_k > 0 ? o.clamp_k : 8;
    std::vector<TropicalMatrix> elems = closure(gens, k);

    int missing = 0;
    for (const TropicalMatrix& m : elems)
        if (!has_negative_diagonal(m)) ++missing;
    std::cout << "closure: " << elems.size() << " elements\n";
    if (missing == 0)
        std::cout << "negative diagonal: all elements\n";
    else
        std::cout << "negative diagonal: missing on " << missing << " elements\n";
    if (o.dump)
        for (size_t i = 0; i < elems.size(); ++i) {
            std::cout << "element " << i + 1 << ":\n" << format_matrix(elems[i]);
        }

    Report report;
    report.method = "matrix";
    Json cert;
    cert["op"] = "closure";
    cert["clamp"] = k;
    cert["size"] = elems.size();
    Json jelems = Json::array();
    for (const TropicalMatrix& m : elems) jelems.push_back(matrix_json(m));
    cert["elements"] = std::move(jelems);
    cert["all_negative_diagonal"] = missing == 0;
    report.certificate = std::move(cert);
    return em.finish(report, missing == 0 ? 0 : 1);
}

struct RamseyOpts {
    long long k = 0;
    long long c = 0;
    std::string file;
    std::string values;
};

int run_ramsey(const std::string& op, const RamseyOpts& o, const Emitter& em) {
    Report report;
    report.method = "ramsey";
    Json cert;
    cert["op"] = op;
    int code = 0;

    if (op == "trt-size") {
        long long size = trt_size(static_cast<int>(o.k), static_cast<int>(o.c));
        std::cout << size << '\n';
        cert["k"] = o.k;
        cert["c"] = o.c;
        cert["size"] = size;
    } else if (op == "trt-build") {
        EdgeColoring g = build_extremal(static_cast<int>(o.k), static_cast<int>(o.c));
        std::cout << format_coloring(g);
        cert["k"] = o.k;
        cert["c"] = o.c;
        cert["vertices"] = g.n;
        cert["coloring"] = format_coloring(g);
    } else if (op == "mip") {
        EdgeColoring g = read_coloring_file(o.file);
        MipResult r = longest_mip(g);
        std::cout << "length: " << r.path.size() << '\n';
        std::cout << "color: " << r.color << '\n';
        std::vector<std::string> verts;
        for (int v : r.path) verts.push_back(std::to_string(v));
        std::cout << "path: " << join(verts, " ") << '\n';
        cert["length"] = r.path.size();
        cert["color"] = r.color;
        cert["path"] = r.path;
    } else if (op == "check-transitive") {
        EdgeColoring g = read_coloring_file(o.file);
        auto v = transitivity_violation(g);
        if (!v) {
            std::cout << "transitive: yes\n";
            cert["transitive"] = true;
            cert["violation"] = nullptr;
        } else {
            std::cout << "transitive: no\n";
            std::cout << "violation: (" << v->i << ", " << v->j << ", " << v->k << ")\n";
            cert["transitive"] = false;
            cert["violation"] = Json::array({v->i, v->j, v->k});
            code = 1;
        }
    } else if (op == "search-homog") {
        EdgeColoring g = read_coloring_file(o.file);
        auto h = find_homogeneous(g, static_cast<int>(o.k));
        if (h) {
            std::vector<std::string> verts;
            for (int v : h->vertices) verts.push_back(std::to_string(v));
            std::cout << "homogeneous: " << join(verts, " ") << " (color " << h->color << ")\n";
            cert["vertices"] = h->vertices;
            cert["color"] = h->color;
        } else {
            std::cout << "homogeneous: none\n";
            cert["vertices"] = nullptr;
            code = 1;
        }
    } else {  // monotone
        std::vector<long long> seq = parse_int_list(o.values, "sequence");
        MonotoneResult r = monotone_subsequence(seq, static_cast<int>(o.k));
        std::cout << "length: " << r.values.size() << '\n';
        std::cout << "direction: " << (r.increasing ? "increasing" : "decreasing") << '\n';
        std::vector<std::string> vals;
        for (long long v : r.values) vals.push_back(std::to_string(v));
        std::cout << "values: " << join(vals, " ") << '\n';
        cert["values"] = r.values;
        cert["increasing"] = r.increasing;
        if (static_cast<long long>(r.values.size()) < o.k) code = 1;
    }

    report.certificate = std::move(cert);
    return em.finish(report, code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"termination analysis for interactive integer while-loop programs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Emitter em;
    app.add_option("--json", em.json_path, "write a JSON report to this path");

    AnalyzeOpts ao;
    CLI::App* analyze = app.add_subcommand("analyze", "prove termination of a program");
    analyze->fallthrough();
    analyze->add_option("file", ao.file, "program file")->required();
    analyze->add_option("--method", ao.method, "analysis method")
        ->check(CLI::IsMember({"sct", "ranking", "transinv"}));
    analyze->add_option("--functions", ao.functions, "comma-separated measure functions");
    analyze->add_option("--clamp", ao.clamp, "clamp constant K")->check(CLI::PositiveNumber);
    analyze->add_option("--criterion", ao.criterion, "closure criterion")
        ->check(CLI::IsMember({"A", "B"}));
    analyze->add_option("--rank", ao.rank, "comma-separated lexicographic rank components");
    analyze->add_option("--invariant", ao.invariant, "transition invariant file");
    analyze->add_option("--box", ao.box, "state box LO:HI for box-checked methods");
    analyze->add_option("--input-cap", ao.input_cap, "input enumeration window")
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--pair-budget", ao.pair_budget, "reachable pair budget")
        ->check(CLI::PositiveNumber);
    analyze->add_flag("--dump", ao.dump, "dump closure elements in matrix text format");

    SimulateOpts so;
    CLI::App* simulate = app.add_subcommand("simulate", "run a program step by step");
    simulate->fallthrough();
    simulate->add_option("file", so.file, "program file")->required();
    simulate->add_option("--start", so.start, "comma-separated start state")->required();
    CLI::Option* seed_opt = simulate->add_option("--seed", so.seed, "random strategy seed");
    CLI::Option* script_opt =
        simulate->add_option("--script", so.script, "scripted choices, e.g. \"1:2,3;2\"");
    seed_opt->excludes(script_opt);
    simulate->add_option("--max-steps", so.max_steps, "step budget")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--input-cap", so.input_cap, "random input window")
        ->check(CLI::NonNegativeNumber);

    SegmentsOpts go;
    CLI::App* segments = app.add_subcommand("segments", "enumerate computation segments");
    segments->fallthrough();
    segments->add_option("file", go.file, "program file")->required();
    segments->add_option("--box", go.box, "start state box LO:HI");
    segments->add_option("--max-len", go.max_len, "maximum states per segment")
        ->check(CLI::PositiveNumber);
    segments->add_option("--input-cap", go.input_cap, "input enumeration window")
        ->check(CLI::NonNegativeNumber);
    segments->add_flag("--print", go.print, "print every segment");

    AuditOpts uo;
    CLI::App* audit = app.add_subcommand("audit", "check a size-change matrix against runs");
    audit->fallthrough();
    audit->add_option("file", uo.file, "program file")->required();
    audit->add_option("--case", uo.case_id, "case id")->check(CLI::PositiveNumber);
    audit->add_option("--functions", uo.functions, "comma-separated measure functions");
    audit->add_option("--matrix", uo.matrix, "matrix file (default: extracted)");
    audit->add_option("--box", uo.box, "state box LO:HI");
    audit->add_option("--input-cap", uo.input_cap, "input enumeration window")
        ->check(CLI::NonNegativeNumber);

    MatrixOpts mo_mul, mo_pow, mo_clo;
    CLI::App* matrix = app.add_subcommand("matrix", "min-plus matrix operations on files");
    matrix->fallthrough();
    matrix->require_subcommand(1);
    CLI::App* mmul = matrix->add_subcommand("mul", "left-to-right product");
    mmul->fallthrough();
    mmul->add_option("files", mo_mul.files, "matrix files")->required()->expected(-2);
    mmul->add_option("--clamp", mo_mul.clamp_k, "clamp after each product")
        ->check(CLI::PositiveNumber);
    CLI::App* mpow = matrix->add_subcommand("pow", "repeated product");
    mpow->fallthrough();
    mpow->add_option("file", mo_pow.file, "matrix file")->required();
    mpow->add_option("power", mo_pow.power, "exponent")->required()->check(CLI::PositiveNumber);
    mpow->add_option("--clamp", mo_pow.clamp_k, "clamp after each product")
        ->check(CLI::PositiveNumber);
    CLI::App* mclo = matrix->add_subcommand("closure", "clamped product closure");
    mclo->fallthrough();
    mclo->add_option("files", mo_clo.files, "generator matrix files")->required()->expected(-1);
    mclo->add_option("--clamp", mo_clo.clamp_k, "clamp constant K (default 8)")
        ->check(CLI::PositiveNumber);
    mclo->add_flag("--dump", mo_clo.dump, "print every closure element");

    RamseyOpts ro_size, ro_build, ro_mip, ro_check, ro_homog, ro_mono;
    CLI::App* ramsey = app.add_subcommand("ramsey", "transitive Ramsey combinatorics");
    ramsey->fallthrough();
    ramsey->require_subcommand(1);
    CLI::App* rsize = ramsey->add_subcommand("trt-size", "least forcing size (k-1)^c + 1");
    rsize->fallthrough();
    rsize->add_option("k", ro_size.k, "path length")->required();
    rsize->add_option("c", ro_size.c, "color count")->required();
    CLI::App* rbuild = ramsey->add_subcommand("trt-build", "extremal transitive coloring");
    rbuild->fallthrough();
    rbuild->add_option("k", ro_build.k, "path length")->required();
    rbuild->add_option("c", ro_build.c, "color count")->required();
    CLI::App* rmip = ramsey->add_subcommand("mip", "longest monochromatic increasing path");
    rmip->fallthrough();
    rmip->add_option("file", ro_mip.file, "coloring file")->required();
    CLI::App* rcheck = ramsey->add_subcommand("check-transitive", "transitivity check");
    rcheck->fallthrough();
    rcheck->add_option("file", ro_check.file, "coloring file")->required();
    CLI::App* rhomog = ramsey->add_subcommand("search-homog", "homogeneous set search");
    rhomog->fallthrough();
    rhomog->add_option("file", ro_homog.file, "coloring file")->required();
    rhomog->add_option("k", ro_homog.k, "set size")->required();
    CLI::App* rmono = ramsey->add_subcommand("monotone", "monotone subsequence");
    rmono->fallthrough();
    rmono->add_option("values", ro_mono.values, "comma-separated sequence")->required();
    rmono->add_option("k", ro_mono.k, "target length")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) return run_analyze(ao, em);
        if (*simulate) return run_simulate(so, em);
        if (*segments) return run_segments(go, em);
        if (*audit) return run_audit(uo, em);
        if (*matrix) {
            if (*mmul) return run_matrix_mul(mo_mul, em);
            if (*mpow) return run_matrix_pow(mo_pow, em);
            return run_matrix_closure(mo_clo, em);
        }
        if (*rsize) return run_ramsey("trt-size", ro_size, em);
        if (*rbuild) return run_ramsey("trt-build", ro_build, em);
        if (*rmip) return run_ramsey("mip", ro_mip, em);
        if (*rcheck) return run_ramsey("check-transitive", ro_check, em);
        if (*rhomog) return run_ramsey("search-homog", ro_homog, em);
        return run_ramsey("monotone", ro_mono, em);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
