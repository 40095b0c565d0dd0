#include "termlab/tropical.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace termlab {

TropicalMatrix TropicalMatrix::identity(int dim) {
    TropicalMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 0;
    return m;
}

TropicalMatrix mul(const TropicalMatrix& a, const TropicalMatrix& b) {
    if (a.n != b.n)
        throw Error("matrix dimension mismatch: " + std::to_string(a.n) + " vs " +
                    std::to_string(b.n));
    TropicalMatrix r(a.n);
    for (int i = 0; i < a.n; ++i) {
        for (int k = 0; k < a.n; ++k) {
            long long aik = a.at(i, k);
            if (aik == kInf) continue;
            for (int j = 0; j < a.n; ++j) {
                long long s = tropical_add(aik, b.at(k, j));
                if (s < r.at(i, j)) r.at(i, j) = s;
            }
        }
    }
    return r;
}

long long clamp_entry(long long v, long long k) {
    if (k < 1) throw Error("clamp bound must be positive");
    if (v == kInf) return kInf;
    if (v < -k) return -k;
    if (v > k) return kInf;
    return v;
}

TropicalMatrix clamp(const TropicalMatrix& a, long long k) {
    TropicalMatrix r = a;
    for (long long& v : r.e) v = clamp_entry(v, k);
    return r;
}

bool has_negative_diagonal(const TropicalMatrix& a) {
    for (int i = 0; i < a.n; ++i)
        if (a.at(i, i) != kInf && a.at(i, i) < 0) return true;
    return false;
}

bool column_condition(const TropicalMatrix& a) {
    for (int j = 0; j < a.n; ++j) {
        int finite = 0;
        for (int i = 0; i < a.n; ++i)
            if (a.at(i, j) != kInf) ++finite;
        if (finite > 1) return false;
    }
    return true;
}

std::optional<int> power_diag_negative(const TropicalMatrix& a, long long k) {
    TropicalMatrix base = clamp(a, k);
    TropicalMatrix power = base;
    std::set<TropicalMatrix> seen;
    int p = 1;
    for (;;) {
        if (has_negative_diagonal(power)) return p;
        if (!seen.insert(power).second) return std::nullopt;
        power = clamp(mul(power, base), k);
        ++p;
    }
}

std::string format_matrix(const TropicalMatrix& a) {
    std::ostringstream out;
    out << a.n << "\n";
    for (int i = 0; i < a.n; ++i) {
        for (int j = 0; j < a.n; ++j) {
            if (j) out << " ";
            if (a.at(i, j) == kInf)
                out << "inf";
            else
                out << a.at(i, j);
        }
        out << "\n";
    }
    return out.str();
}

TropicalMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    int n = 0;
    if (!(in >> n) || n < 1) throw Error("matrix header must be a positive dimension");
    TropicalMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok))
                throw Error("matrix is missing entry (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ")");
            if (tok == "inf") {
                m.at(i, j) = kInf;
            } else {
                try {
                    size_t used = 0;
                    m.at(i, j) = std::stoll(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw Error("bad matrix entry '" + tok + "'");
                }
            }
        }
    }
    std::string extra;
    if (in >> extra) throw Error("trailing content after matrix: '" + extra + "'");
    return m;
}

TropicalMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str());
}

}  // namespace termlab
