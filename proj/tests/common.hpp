#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <termlab/error.hpp>
#include <termlab/prog.hpp>
#include <termlab/tropical.hpp>

namespace testutil {

inline std::string corpus_path(const std::string& name) {
    return std::string(TERMLAB_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw termlab::Error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline termlab::Program corpus_program(const std::string& name) {
    return termlab::parse_program(read_file(corpus_path(name)));
}

inline constexpr long long inf = termlab::kInf;

inline termlab::TropicalMatrix mat(const std::vector<std::vector<long long>>& rows) {
    termlab::TropicalMatrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
    return m;
}

struct CmdResult {
    int exit = -1;
    std::string out;  // stdout and stderr interleaved
};

// Runs a shell command, capturing combined output and the exit code.
inline CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw termlab::Error("popen failed for: " + cmd);
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace testutil
