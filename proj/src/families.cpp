#include "peritl/families.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <cctype>
#include <sstream>

namespace peritl {

// defined in fusion.cpp
ModuleVector fused_act_c(const FamilyPtr& fam, int n, int j, const BState& s);
ModuleVector fused_act_cdag(const FamilyPtr& fam, int n, int j, const BState& s);
std::vector<BState> fused_basis(const FamilyPtr& fam, int n, const BasisBounds& bounds);

Assignment family_assignment(const FamilyPtr& fam) {
    Assignment a;
    if (fam && fam->kind == FamilyKind::Fused) {
        if (fam->left->numeric()) return family_assignment(fam->left);
        if (fam->right->numeric()) return family_assignment(fam->right);
        return a;
    }
    if (fam && fam->numeric()) {
        // beta = -q - q^{-1} must equal beta_mu = 2 cos(pi m_mu / l)
        const RSOSModel& m = fam->rsos;
        double theta = (M_PI - M_PI * m.exponents()[m.mu - 1] / m.coxeter()) / 2.0;
        a.set(Var::s, std::polar(1.0, theta));
    }
    return a;
}

Scalar to_family_scalar(const FamilyPtr& fam, const Scalar& c) {
    if (fam && fam->numeric() && c.exact()) return Scalar::numeric(c.evaluate(family_assignment(fam)));
    return c;
}

// -- RSOS model ----------------------------------------------------------------

int RSOSModel::nodes() const {
    switch (series) {
        case ADE::A:
        case ADE::D: return rank;
        case ADE::E6: return 6;
        case ADE::E7: return 7;
        case ADE::E8: return 8;
    }
    return 0;
}

int RSOSModel::coxeter() const {
    switch (series) {
        case ADE::A: return rank + 1;
        case ADE::D: return 2 * rank - 2;
        case ADE::E6: return 12;
        case ADE::E7: return 18;
        case ADE::E8: return 30;
    }
    return 0;
}

std::vector<int> RSOSModel::exponents() const {
    switch (series) {
        case ADE::A: {
            std::vector<int> e(rank);
            std::iota(e.begin(), e.end(), 1);
            return e;
        }
        case ADE::D: {
            std::vector<int> e;
            for (int m = 1; m <= 2 * rank - 3; m += 2) e.push_back(m);
            e.push_back(rank - 1);
            std::sort(e.begin(), e.end());
            return e;
        }
        case ADE::E6: return {1, 4, 5, 7, 8, 11};
        case ADE::E7: return {1, 5, 7, 9, 11, 13, 17};
        case ADE::E8: return {1, 7, 11, 13, 17, 19, 23, 29};
    }
    return {};
}

std::vector<std::vector<int>> RSOSModel::adjacency() const {
    int n = nodes();
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    auto edge = [&](int i, int j) { a[i][j] = a[j][i] = 1; };
    switch (series) {
        case ADE::A:
            for (int i = 0; i + 1 < n; i++) edge(i, i + 1);
            break;
        case ADE::D:
            for (int i = 0; i + 1 < n - 2; i++) edge(i, i + 1);
            edge(n - 3, n - 2);
            edge(n - 3, n - 1);
            break;
        case ADE::E6:
            for (int i = 0; i < 4; i++) edge(i, i + 1);
            edge(2, 5);
            break;
        case ADE::E7:
            for (int i = 0; i < 5; i++) edge(i, i + 1);
            edge(2, 6);
            break;
        case ADE::E8:
            for (int i = 0; i < 6; i++) edge(i, i + 1);
            edge(2, 7);
            break;
    }
    return a;
}

std::vector<int> RSOSModel::perm() const {
    if (!K.empty()) return K;
    std::vector<int> p(nodes());
    std::iota(p.begin(), p.end(), 0);
    return p;
}

void RSOSModel::validate() const {
    int n = nodes();
    if (series == ADE::A && rank < 1) throw std::invalid_argument("RSOS: A_n needs n >= 1");
    if (series == ADE::D && rank < 4) throw std::invalid_argument("RSOS: D_n needs n >= 4");
    if (mu < 1 || mu > n) throw std::invalid_argument("RSOS: exponent index out of range");
    auto p = perm();
    if ((int)p.size() != n) throw std::invalid_argument("RSOS: K has wrong length");
    std::vector<char> hit(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || hit[v]++) throw std::invalid_argument("RSOS: K not a permutation");
    }
    auto a = adjacency();
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            if (a[p[i]][p[j]] != a[i][j])
                throw std::invalid_argument("RSOS: K is not a graph automorphism");
    int m = exponents()[mu - 1];
    if (std::gcd(m, coxeter()) != 1)
        throw std::invalid_argument("RSOS: eigenvector of mu has vanishing entries");
}

double RSOSModel::beta_mu() const {
    return 2.0 * std::cos(M_PI * exponents()[mu - 1] / coxeter());
}

namespace {

// Jacobi rotation eigensolver; the graphs have at most 8 nodes.
void jacobi(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v) {
    int n = (int)a.size();
    v.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; i++) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 200; sweep++) {
        double off = 0;
        for (int p = 0; p < n; p++)
            for (int q = p + 1; q < n; q++) off += a[p][q] * a[p][q];
        if (off < 1e-26) break;
        for (int p = 0; p < n; p++)
            for (int q = p + 1; q < n; q++) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int i = 0; i < n; i++) {
                    double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; i++) {
                    double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < n; i++) {
                    double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
    }
}

}  // namespace

std::vector<double> RSOSModel::eigenvector() const {
    validate();
    int n = nodes();
    auto adj = adjacency();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) a[i][j] = adj[i][j];
    std::vector<std::vector<double>> v;
    jacobi(a, v);
    double target = beta_mu();
    int best = -1;
    double bestd = 1e9;
    for (int c = 0; c < n; c++) {
        double d = std::abs(a[c][c] - target);
        if (d < bestd) {
            bestd = d;
            best = c;
        }
    }
    if (bestd > 1e-8) throw std::logic_error("RSOS: eigenvalue not found");
    std::vector<double> s(n);
    for (int i = 0; i < n; i++) s[i] = v[i][best];
    if (s[0] < 0)
        for (double& x : s) x = -x;
    for (double x : s)
        if (std::abs(x) < 1e-9) throw std::logic_error("RSOS: vanishing eigenvector entry");
    return s;
}

std::vector<int> RSOSModel::coloring() const {
    int n = nodes();
    auto a = adjacency();
    std::vector<int> col(n, 0);
    col[0] = 1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < n; y++)
            if (a[x][y] && col[y] == 0) {
                col[y] = -col[x];
                stack.push_back(y);
            }
    }
    return col;
}

bool RSOSModel::color_preserving() const {
    auto col = coloring();
    auto p = perm();
    return col[p[0]] == col[0];
}

// -- descriptors ---------------------------------------------------------------

namespace {

// canonical instances so that descriptor pointers can key caches
FamilyPtr intern_family(std::shared_ptr<FamilyDesc> f) {
    static std::map<std::string, FamilyPtr> registry;
    std::string key = f->str();
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    FamilyPtr p = std::move(f);
    registry.emplace(std::move(key), p);
    return p;
}

}  // namespace

int FamilyDesc::parity() const {
    switch (kind) {
        case FamilyKind::Wk:
        case FamilyKind::Wkx: return k2 % 2;
        case FamilyKind::Vacuum: return 0;
        case FamilyKind::XXZ: return m2 ? std::abs(*m2) % 2 : 0;
        case FamilyKind::RSOS: return rsos.color_preserving() ? 0 : 1;
        case FamilyKind::Fused: return (left->parity() + right->parity()) % 2;
        case FamilyKind::LDiag: return k2 % 2;
    }
    return 0;
}

bool same_family(const FamilyDesc& a, const FamilyDesc& b) {
    if (a.kind != b.kind || a.tags != b.tags) return false;
    switch (a.kind) {
        case FamilyKind::Wk: return a.k2 == b.k2;
        case FamilyKind::Wkx: return a.k2 == b.k2 && a.twist == b.twist;
        case FamilyKind::Vacuum: return true;
        case FamilyKind::XXZ: return a.m2 == b.m2 && a.twist == b.twist;
        case FamilyKind::RSOS: return a.rsos == b.rsos;
        case FamilyKind::Fused:
            return same_family(*a.left, *b.left) && same_family(*a.right, *b.right);
        case FamilyKind::LDiag: return a.k2 == b.k2;
    }
    return false;
}

FamilyPtr make_wk(int k2) {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::Wk;
    f->k2 = k2;
    return intern_family(std::move(f));
}

FamilyPtr make_wkx(int k2, Twist t) {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::Wkx;
    f->k2 = k2;
    f->twist = t;
    return intern_family(std::move(f));
}

FamilyPtr make_vacuum() {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::Vacuum;
    return intern_family(std::move(f));
}

FamilyPtr make_xxz(std::optional<int> m2, Twist t) {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::XXZ;
    f->m2 = m2;
    f->twist = t;
    if (f->twist.var != Var::u) f->twist.var = Var::u;
    return intern_family(std::move(f));
}

FamilyPtr make_rsos(RSOSModel model) {
    model.validate();
    model.eigenvector();
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::RSOS;
    f->rsos = std::move(model);
    return intern_family(std::move(f));
}

FamilyPtr make_fused(FamilyPtr left, FamilyPtr right) {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::Fused;
    f->left = std::move(left);
    f->right = std::move(right);
    return intern_family(std::move(f));
}

FamilyPtr make_ldiag(int base_n) {
    auto f = std::make_shared<FamilyDesc>();
    f->kind = FamilyKind::LDiag;
    f->k2 = base_n;  // the fixed inner boundary size
    return intern_family(std::move(f));
}

FamilyPtr with_transform(FamilyPtr base, TransformTag tag) {
    auto f = std::make_shared<FamilyDesc>(*base);
    f->tags.insert(f->tags.begin(), tag);
    return intern_family(std::move(f));
}

std::string FamilyDesc::str() const {
    std::ostringstream os;
    for (TransformTag t : tags) os << (t == TransformTag::minus ? "minus(" : "reflect(");
    switch (kind) {
        case FamilyKind::Wk:
            os << "Wk:k=" << k2 / 2;
            if (k2 % 2) os << ".5";
            break;
        case FamilyKind::Wkx: {
            os << "Wkx:k=" << k2 / 2;
            if (k2 % 2) os << ".5";
            os << ",x=";
            if (twist.negated) os << '-';
            os << (twist.var == Var::x2 ? "x2" : "x1");
            if (twist.inverted) os << "^-1";
            break;
        }
        case FamilyKind::Vacuum: os << "V"; break;
        case FamilyKind::XXZ: {
            os << "XXZ:m=";
            if (m2)
                os << *m2 / 2 << (*m2 % 2 ? ".5" : "");
            else
                os << "all";
            if (twist.negated || twist.inverted) {
                os << ",u=";
                if (twist.negated) os << '-';
                os << 'u';
                if (twist.inverted) os << "^-1";
            }
            break;
        }
        case FamilyKind::RSOS: {
            const char* names[] = {"A", "D", "E6", "E7", "E8"};
            os << "RSOS:" << names[(int)rsos.series];
            if (rsos.series == ADE::A || rsos.series == ADE::D) os << rsos.rank;
            os << ",mu=" << rsos.mu << ",K=";
            auto p = rsos.perm();
            bool ident = true;
            for (int i = 0; i < (int)p.size(); i++) ident &= p[i] == i;
            if (ident) {
                os << "id";
            } else {
                os << '[';
                for (size_t i = 0; i < p.size(); i++) os << (i ? "," : "") << p[i];
                os << ']';
            }
            break;
        }
        case FamilyKind::Fused: os << "fuse(" << left->str() << ";" << right->str() << ")"; break;
        case FamilyKind::LDiag: os << "L:" << k2; break;
    }
    for (size_t i = 0; i < tags.size(); i++) os << ')';
    return os.str();
}

namespace {

int parse_half(const std::string& tok) {
    // "1", "0.5", "1.5", "1/2", "3/2" -> doubled integer
    auto slash = tok.find('/');
    if (slash != std::string::npos) {
        int num = std::stoi(tok.substr(0, slash));
        int den = std::stoi(tok.substr(slash + 1));
        if (den == 2) return num;
        if (den == 1) return 2 * num;
        throw std::invalid_argument("family parse: bad half-integer '" + tok + "'");
    }
    auto dot = tok.find('.');
    if (dot != std::string::npos) {
        int whole = std::stoi(tok.substr(0, dot));
        if (tok.substr(dot + 1) != "5")
            throw std::invalid_argument("family parse: bad half-integer '" + tok + "'");
        return 2 * whole + (whole < 0 || tok[0] == '-' ? -1 : 1);
    }
    return 2 * std::stoi(tok);
}

Twist parse_twist(std::string tok, Var fallback) {
    Twist t;
    t.var = fallback;
    if (!tok.empty() && tok[0] == '-') {
        t.negated = true;
        tok = tok.substr(1);
    }
    if (tok.size() >= 3 && tok.substr(tok.size() - 3) == "^-1") {
        t.inverted = true;
        tok = tok.substr(0, tok.size() - 3);
    }
    if (tok == "x1")
        t.var = Var::x1;
    else if (tok == "x2")
        t.var = Var::x2;
    else if (tok == "u")
        t.var = Var::u;
    else if (!tok.empty())
        throw std::invalid_argument("family parse: bad twist '" + tok + "'");
    return t;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '[') depth++;
        if (c == ')' || c == ']') depth--;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

FamilyPtr parse_family(const std::string& text) {
    std::string s = text;
    // strip whitespace
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace((unsigned char)c); }),
            s.end());
    if (s.rfind("minus(", 0) == 0 && s.back() == ')')
        return with_transform(parse_family(s.substr(6, s.size() - 7)), TransformTag::minus);
    if (s.rfind("reflect(", 0) == 0 && s.back() == ')')
        return with_transform(parse_family(s.substr(8, s.size() - 9)), TransformTag::reflect);
    if (s.rfind("fuse(", 0) == 0 && s.back() == ')') {
        auto parts = split(s.substr(5, s.size() - 6), ';');
        if (parts.size() != 2) throw std::invalid_argument("family parse: fuse(A;B)");
        return make_fused(parse_family(parts[0]), parse_family(parts[1]));
    }
    if (s == "V") return make_vacuum();
    auto colon = s.find(':');
    std::string head = colon == std::string::npos ? s : s.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto fields = split(rest, ',');
    if (head == "Wk" || head == "Wkx") {
        int k2 = -1;
        Twist t{Var::x1, false, false};
        for (const auto& f : fields) {
            if (f.rfind("k=", 0) == 0)
                k2 = parse_half(f.substr(2));
            else if (f.rfind("x=", 0) == 0)
                t = parse_twist(f.substr(2), Var::x1);
            else if (!f.empty())
                throw std::invalid_argument("family parse: unknown field '" + f + "'");
        }
        if (k2 < 0) throw std::invalid_argument("family parse: missing k");
        return head == "Wk" ? make_wk(k2) : make_wkx(k2, t);
    }
    if (head == "XXZ") {
        std::optional<int> m2;
        Twist t{Var::u, false, false};
        for (const auto& f : fields) {
            if (f.rfind("m=", 0) == 0) {
                std::string v = f.substr(2);
                if (v != "all") m2 = parse_half(v);
            } else if (f.rfind("u=", 0) == 0) {
                t = parse_twist(f.substr(2), Var::u);
            } else if (!f.empty()) {
                throw std::invalid_argument("family parse: unknown field '" + f + "'");
            }
        }
        return make_xxz(m2, t);
    }
    if (head == "RSOS") {
        RSOSModel m;
        bool have_series = false;
        for (const auto& f : fields) {
            if (f.rfind("mu=", 0) == 0) {
                m.mu = std::stoi(f.substr(3));
            } else if (f.rfind("K=", 0) == 0) {
                std::string v = f.substr(2);
                if (v == "id") {
                    m.K.clear();
                } else if (v.size() >= 2 && v.front() == '[' && v.back() == ']') {
                    m.K.clear();
                    for (const auto& x : split(v.substr(1, v.size() - 2), ','))
                        m.K.push_back(std::stoi(x));
                } else {
                    throw std::invalid_argument("family parse: bad K '" + v + "'");
                }
            } else if (!f.empty() && !have_series) {
                have_series = true;
                if (f == "E6") {
                    m.series = ADE::E6;
                } else if (f == "E7") {
                    m.series = ADE::E7;
                } else if (f == "E8") {
                    m.series = ADE::E8;
                } else if (f[0] == 'A') {
                    m.series = ADE::A;
                    m.rank = std::stoi(f.substr(1));
                } else if (f[0] == 'D') {
                    m.series = ADE::D;
                    m.rank = std::stoi(f.substr(1));
                } else {
                    throw std::invalid_argument("family parse: bad algebra '" + f + "'");
                }
            }
        }
        if (!have_series) throw std::invalid_argument("family parse: missing algebra");
        return make_rsos(m);
    }
    throw std::invalid_argument("family parse: unknown family '" + text + "'");
}

// -- basis states ---------------------------------------------------------------

std::strong_ordering operator<=>(const FusedCanon& a, const FusedCanon& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    if (auto c = a.na <=> b.na; c != 0) return c;
    if (auto c = a.nb <=> b.nb; c != 0) return c;
    if (auto c = a.u <=> b.u; c != 0) return c;
    return a.v <=> b.v;
}

std::strong_ordering operator<=>(const BState& a, const BState& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.ints <=> b.ints; c != 0) return c;
    if (auto c = a.wind <=> b.wind; c != 0) return c;
    if (auto c = a.spins <=> b.spins; c != 0) return c;
    bool ha = (bool)a.fused, hb = (bool)b.fused;
    if (auto c = ha <=> hb; c != 0) return c;
    if (!ha) return std::strong_ordering::equal;
    return *a.fused <=> *b.fused;
}

bool operator==(const BState& a, const BState& b) { return (a <=> b) == 0; }

BState wk_state(std::vector<int> tuple, long wind) {
    BState s;
    s.kind = FamilyKind::Wk;
    s.ints = std::move(tuple);
    s.wind = wind;
    return s;
}

BState wkx_state(std::vector<int> tuple) {
    BState s;
    s.kind = FamilyKind::Wkx;
    s.ints = std::move(tuple);
    return s;
}

BState vac_state(std::vector<int> match) {
    BState s;
    s.kind = FamilyKind::Vacuum;
    s.ints = std::move(match);
    return s;
}

BState xxz_state(std::vector<int8_t> spins) {
    BState s;
    s.kind = FamilyKind::XXZ;
    s.spins = std::move(spins);
    return s;
}

BState rsos_state(std::vector<int> path) {
    BState s;
    s.kind = FamilyKind::RSOS;
    s.ints = std::move(path);
    return s;
}

BState ldiag_state(const AnnularDiagram& d) {
    BState s;
    s.kind = FamilyKind::LDiag;
    s.ints.push_back(d.b);
    for (int v : d.out) s.ints.push_back(v);
    for (int v : d.in) s.ints.push_back(-v);
    s.wind = d.l;
    return s;
}

AnnularDiagram ldiag_decode(const FamilyPtr& fam, int n, const BState& s) {
    AnnularDiagram d;
    d.n_out = n;
    d.n_in = fam->k2;
    d.b = s.ints[0];
    d.l = s.wind;
    for (size_t i = 1; i < s.ints.size(); i++) {
        if (s.ints[i] > 0)
            d.out.push_back(s.ints[i]);
        else
            d.in.push_back(-s.ints[i]);
    }
    return d;
}

BState fused_bstate(const FusedCanon& fc) {
    BState s;
    s.kind = FamilyKind::Fused;
    s.fused = std::make_shared<FusedCanon>(fc);
    return s;
}

std::string BState::str() const {
    std::ostringstream os;
    switch (kind) {
        case FamilyKind::Wk: {
            os << "w[";
            for (size_t i = 0; i < ints.size(); i++) os << (i ? "," : "") << ints[i];
            os << "|" << wind << "]";
            break;
        }
        case FamilyKind::Wkx: {
            os << "t[";
            for (size_t i = 0; i < ints.size(); i++) os << (i ? "," : "") << ints[i];
            os << "]";
            break;
        }
        case FamilyKind::Vacuum: {
            os << "arcs[";
            bool first = true;
            for (int i = 1; i < (int)ints.size(); i++)
                if (ints[i] > i) {
                    os << (first ? "" : " ") << "(" << i << "," << ints[i] << ")";
                    first = false;
                }
            os << "]";
            break;
        }
        case FamilyKind::XXZ:
            for (int8_t v : spins) os << (v > 0 ? '+' : '-');
            if (spins.empty()) os << "()";
            break;
        case FamilyKind::RSOS: {
            os << "path(";
            for (size_t i = 0; i < ints.size(); i++) os << (i ? "," : "") << ints[i] + 1;
            os << ")";
            break;
        }
        case FamilyKind::Fused:
            os << "c0^" << fused->n << ".(" << fused->u.str() << " (x) " << fused->v.str() << ")";
            break;
        case FamilyKind::LDiag: {
            os << "d[b=" << ints[0] << "|";
            for (size_t i = 1; i < ints.size(); i++) os << (i > 1 ? "," : "") << ints[i];
            os << "|" << wind << "]";
            break;
        }
    }
    return os.str();
}

// -- module vectors ---------------------------------------------------------------

void ModuleVector::add(const BState& s, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(s);
    if (it == terms.end()) {
        terms.emplace(s, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& o) {
    for (const auto& [s, c] : o.terms) add(s, c);
    return *this;
}

ModuleVector ModuleVector::operator*(const Scalar& c) const {
    ModuleVector r;
    r.family = family;
    r.n = n;
    if (c.is_zero()) return r;
    for (const auto& [s, v] : terms) {
        Scalar t = v * c;
        if (!t.is_zero()) r.terms[s] = t;
    }
    return r;
}

ModuleVector ModuleVector::operator-(const ModuleVector& o) const {
    ModuleVector r = *this;
    for (const auto& [s, c] : o.terms) r.add(s, -c);
    return r;
}

double ModuleVector::max_dev(const ModuleVector& o) const {
    double dev = 0;
    auto probe = [&](const ModuleVector& a, const ModuleVector& b) {
        for (const auto& [s, c] : a.terms) {
            auto it = b.terms.find(s);
            std::complex<double> d =
                it == b.terms.end() ? c.num() : c.num() - it->second.num();
            dev = std::max(dev, std::abs(d));
        }
    };
    probe(*this, o);
    probe(o, *this);
    return dev;
}

bool ModuleVector::eq(const ModuleVector& o, double tol) const {
    if (family && family->numeric()) return max_dev(o) <= tol;
    return terms == o.terms;
}

ModuleVector zero_vector(FamilyPtr fam, int n) {
    ModuleVector v;
    v.family = std::move(fam);
    v.n = n;
    return v;
}

ModuleVector unit_vector(FamilyPtr fam, int n, BState s) {
    ModuleVector v = zero_vector(std::move(fam), n);
    v.add(s, scalar_one_for(v.family));
    return v;
}

Scalar scalar_one_for(const FamilyPtr& fam) {
    return fam && fam->numeric() ? Scalar::numeric({1.0, 0.0}) : Scalar::one();
}

// -- enumeration ------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> noncrossing_matchings(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> match(n + 1, 0);
    // pair the smallest unmatched node; candidates stop at the first matched
    // node so arcs never cross
    auto go = [&](auto&& self) -> void {
        int first = 0;
        for (int i = 1; i <= n; i++)
            if (!match[i]) {
                first = i;
                break;
            }
        if (!first) {
            out.push_back(match);
            return;
        }
        for (int j = first + 1; j <= n; j += 2) {
            if (match[j]) break;  // segment boundary
            bool free_run = true;
            for (int t = first + 1; t < j; t++)
                if (match[t]) free_run = false;
            if (!free_run) break;
            match[first] = j;
            match[j] = first;
            self(self);
            match[first] = match[j] = 0;
        }
    };
    go(go);
    return out;
}

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; i++) r = r * (n - k + i) / i;
    return r;
}

void spin_strings(int n, std::optional<int> m2, std::vector<BState>& out) {
    std::vector<int8_t> cur(n, 0);
    auto rec = [&](auto&& self, int pos, int sum) -> void {
        if (pos == n) {
            if (!m2 || sum == *m2) out.push_back(xxz_state(cur));
            return;
        }
        cur[pos] = 1;
        self(self, pos + 1, sum + 1);
        cur[pos] = -1;
        self(self, pos + 1, sum - 1);
    };
    rec(rec, 0, 0);
}

void rsos_paths(const RSOSModel& model, int n, std::vector<BState>& out) {
    auto adj = model.adjacency();
    auto K = model.perm();
    int nn = model.nodes();
    std::vector<int> path(n + 1);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n + 1) {
            if (path[n] == K[path[0]]) out.push_back(rsos_state(path));
            return;
        }
        for (int a = 0; a < nn; a++) {
            if (pos > 0 && !adj[path[pos - 1]][a]) continue;
            path[pos] = a;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<BState> basis(const FamilyPtr& fam, int n, const BasisBounds& bounds) {
    if (!fam->admissible(n)) throw std::invalid_argument("basis: N of wrong parity");
    std::vector<BState> out;
    switch (fam->kind) {
        case FamilyKind::Wk: {
            if (n < fam->k2) return out;
            for (const auto& t : opener_tuples(n, fam->k2)) {
                long lo = fam->k2 == 0 ? 0 : -bounds.wind;
                for (long w = lo; w <= bounds.wind; w++) out.push_back(wk_state(t, w));
            }
            break;
        }
        case FamilyKind::Wkx: {
            if (n < fam->k2) return out;
            for (const auto& t : opener_tuples(n, fam->k2)) out.push_back(wkx_state(t));
            break;
        }
        case FamilyKind::Vacuum:
            for (auto& m : noncrossing_matchings(n)) out.push_back(vac_state(m));
            break;
        case FamilyKind::XXZ: spin_strings(n, fam->m2, out); break;
        case FamilyKind::RSOS: rsos_paths(fam->rsos, n, out); break;
        case FamilyKind::Fused: return fused_basis(fam, n, bounds);
        case FamilyKind::LDiag: {
            int base = fam->k2;
            for (int b = n % 2; b <= std::min(n, base); b += 2) {
                for (const auto& to : opener_tuples(n, b))
                    for (const auto& ti : opener_tuples(base, b)) {
                        long lo = b == 0 ? 0 : -bounds.wind;
                        for (long w = lo; w <= bounds.wind; w++)
                            out.push_back(ldiag_state(AnnularDiagram{n, base, b, w, to, ti}));
                    }
            }
            break;
        }
    }
    return out;
}

std::optional<long> dimension(const FamilyPtr& fam, int n) {
    if (!fam->admissible(n)) return 0;
    switch (fam->kind) {
        case FamilyKind::Wk: return std::nullopt;
        case FamilyKind::Wkx:
            if (n < fam->k2) return 0;
            return binom(n, (n - fam->k2) / 2);
        case FamilyKind::Vacuum: {
            long c = binom(n, n / 2) / (n / 2 + 1);
            return c;
        }
        case FamilyKind::XXZ: {
            if (!fam->m2) return 1L << n;
            if (n < std::abs(*fam->m2)) return 0;
            return binom(n, (n - *fam->m2) / 2);
        }
        case FamilyKind::RSOS: {
            int nn = fam->rsos.nodes();
            auto a = fam->rsos.adjacency();
            auto K = fam->rsos.perm();
            std::vector<std::vector<long>> p(nn, std::vector<long>(nn, 0));
            for (int i = 0; i < nn; i++) p[i][i] = 1;
            for (int step = 0; step < n; step++) {
                std::vector<std::vector<long>> q(nn, std::vector<long>(nn, 0));
                for (int i = 0; i < nn; i++)
                    for (int t = 0; t < nn; t++)
                        if (a[i][t])
                            for (int j = 0; j < nn; j++) q[i][j] += p[t][j];
                p = std::move(q);
            }
            long tr = 0;
            for (int i = 0; i < nn; i++) tr += p[i][K[i]];  // tr(K A^N)
            return tr;
        }
        case FamilyKind::Fused: return std::nullopt;
        case FamilyKind::LDiag: return std::nullopt;
    }
    return std::nullopt;
}

// -- actions ----------------------------------------------------------------------

namespace {

// link-state families: compose the defining diagram with the state diagram
ModuleVector act_link(const FamilyPtr& fam, const AnnularDiagram& g, const BState& st,
                      int result_n) {
    ModuleVector out = zero_vector(fam, result_n);
    AnnularDiagram sd{g.n_in, fam->k2, fam->k2, fam->kind == FamilyKind::Wk ? st.wind : 0,
                      st.ints, {}};
    auto [d, factor] = compose(g, sd);
    if (fam->k2 > 0 && d.b < fam->k2) return out;  // defects closed: zero
    if (fam->kind == FamilyKind::Wk) {
        out.add(wk_state(d.out, d.l), factor);
    } else {
        Scalar tw = fam->k2 > 0 ? fam->twist.factor(d.l) : fam->twist.alpha().pow(d.l);
        out.add(wkx_state(d.out), factor * tw);
    }
    return out;
}

ModuleVector vac_act_c(const FamilyPtr& fam, int n, int j, const BState& st) {
    ModuleVector out = zero_vector(fam, n - 2);
    const std::vector<int>& m = st.ints;
    int p = j == 0 ? n : j;
    int q = j == 0 ? 1 : j + 1;
    Scalar coeff = Scalar::one();
    std::vector<int> nm(n - 1, 0);
    auto relabel = [&](int x) {
        int shift = 0;
        if (x > p) shift++;
        if (x > q) shift++;
        return x - shift;
    };
    if (m[p] == q) {
        coeff = Scalar::beta();
    } else {
        int a = m[p], b = m[q];
        // join the partners of the two capped nodes
        std::vector<int> tmp = m;
        tmp[a] = b;
        tmp[b] = a;
        for (int i = 1; i <= n; i++) {
            if (i == p || i == q) continue;
            nm[relabel(i)] = relabel(tmp[i]);
        }
        out.add(vac_state(nm), coeff);
        return out;
    }
    for (int i = 1; i <= n; i++) {
        if (i == p || i == q) continue;
        nm[relabel(i)] = relabel(m[i]);
    }
    out.add(vac_state(nm), coeff);
    return out;
}

ModuleVector vac_act_cdag(const FamilyPtr& fam, int n, int j, const BState& st) {
    ModuleVector out = zero_vector(fam, n);
    const std::vector<int>& m = st.ints;
    std::vector<int> nm(n + 1, 0);
    if (j >= 1) {
        auto shift = [&](int x) { return x >= j ? x + 2 : x; };
        for (int i = 1; i <= n - 2; i++) nm[shift(i)] = shift(m[i]);
        nm[j] = j + 1;
        nm[j + 1] = j;
    } else {
        for (int i = 1; i <= n - 2; i++) nm[i + 1] = m[i] + 1;
        nm[1] = n;
        nm[n] = 1;
    }
    out.add(vac_state(nm), Scalar::one());
    return out;
}

Scalar i_times(const Scalar& s) { return Scalar(Laurent(CRat::i_unit())) * s; }

ModuleVector xxz_omega(const FamilyPtr& fam, int n, int pw, const BState& st) {
    // Omega = t exp(i phi sigma^z_1): phase by the first spin, then shift left
    ModuleVector out = zero_vector(fam, n);
    std::vector<int8_t> sp = st.spins;
    if (n == 0) {
        out.add(st, Scalar::one());
        return out;
    }
    if (pw > 0) {
        int8_t first = sp[0];
        std::rotate(sp.begin(), sp.begin() + 1, sp.end());
        out.add(xxz_state(sp), fam->twist.factor(first));
    } else {
        int8_t last = sp[n - 1];
        std::rotate(sp.begin(), sp.end() - 1, sp.end());
        out.add(xxz_state(sp), fam->twist.factor(-last));
    }
    return out;
}

ModuleVector xxz_act_c(const FamilyPtr& fam, int n, int j, const BState& st) {
    if (j == 0) {
        // c_0 = c_1 Omega^{-1}
        ModuleVector mid = xxz_omega(fam, n, -1, st);
        ModuleVector out = zero_vector(fam, n - 2);
        for (const auto& [s, c] : mid.terms) {
            ModuleVector t = xxz_act_c(fam, n, 1, s);
            out += t * c;
        }
        return out;
    }
    ModuleVector out = zero_vector(fam, n - 2);
    const auto& sp = st.spins;
    int a = sp[j - 1], b = sp[j];
    if (a == b) return out;
    std::vector<int8_t> ns;
    ns.reserve(n - 2);
    for (int i = 0; i < n; i++)
        if (i != j - 1 && i != j) ns.push_back(sp[i]);
    Scalar coeff = a > 0 ? i_times(Scalar::var(Var::s)) : -i_times(Scalar::var(Var::s, -1));
    out.add(xxz_state(ns), coeff);
    return out;
}

ModuleVector xxz_act_cdag(const FamilyPtr& fam, int n, int j, const BState& st) {
    if (j == 0) {
        // c^dag_0 = Omega c^dag_1
        ModuleVector mid = xxz_act_cdag(fam, n, 1, st);
        ModuleVector out = zero_vector(fam, n);
        for (const auto& [s, c] : mid.terms) out += xxz_omega(fam, n, 1, s) * c;
        return out;
    }
    ModuleVector out = zero_vector(fam, n);
    const auto& sp = st.spins;
    auto insert_pair = [&](int8_t x, int8_t y) {
        std::vector<int8_t> ns;
        ns.reserve(n);
        for (int i = 0; i < j - 1; i++) ns.push_back(sp[i]);
        ns.push_back(x);
        ns.push_back(y);
        for (int i = j - 1; i < n - 2; i++) ns.push_back(sp[i]);
        return xxz_state(ns);
    };
    out.add(insert_pair(1, -1), i_times(Scalar::var(Var::s)));
    out.add(insert_pair(-1, 1), -i_times(Scalar::var(Var::s, -1)));
    return out;
}

struct RSOSTables {
    std::vector<std::complex<double>> sq;  // fixed branch of sqrt(S_a)
    std::vector<std::vector<int>> adj;
    std::vector<int> K, Kinv;
};

const RSOSTables& rsos_tables(const RSOSModel& model) {
    static std::map<RSOSModel, RSOSTables> cache;
    auto it = cache.find(model);
    if (it != cache.end()) return it->second;
    RSOSTables t;
    auto ev = model.eigenvector();
    t.sq.resize(ev.size());
    for (size_t i = 0; i < ev.size(); i++) {
        t.sq[i] = ev[i] >= 0 ? std::complex<double>(std::sqrt(ev[i]), 0)
                             : std::complex<double>(0, std::sqrt(-ev[i]));
    }
    t.adj = model.adjacency();
    t.K = model.perm();
    t.Kinv.resize(t.K.size());
    for (size_t i = 0; i < t.K.size(); i++) t.Kinv[t.K[i]] = (int)i;
    return cache.emplace(model, std::move(t)).first->second;
}

ModuleVector rsos_act_c(const FamilyPtr& fam, int n, int j, const BState& st) {
    const RSOSTables& t = rsos_tables(fam->rsos);
    ModuleVector out = zero_vector(fam, n - 2);
    const auto& a = st.ints;  // length n+1
    if (j >= 1) {
        if (a[j - 1] != a[j + 1]) return out;
        std::vector<int> np;
        np.reserve(n - 1);
        for (int i = 0; i <= n; i++)
            if (i != j && i != j + 1) np.push_back(a[i]);
        out.add(rsos_state(np), Scalar::numeric(t.sq[a[j]] / t.sq[a[j + 1]]));
    } else {
        if (a[n - 1] != t.K[a[1]]) return out;
        std::vector<int> np(a.begin() + 1, a.begin() + n);
        out.add(rsos_state(np), Scalar::numeric(t.sq[a[0]] / t.sq[a[1]]));
    }
    return out;
}

ModuleVector rsos_act_cdag(const FamilyPtr& fam, int n, int j, const BState& st) {
    const RSOSTables& t = rsos_tables(fam->rsos);
    ModuleVector out = zero_vector(fam, n);
    const auto& a = st.ints;  // length n-1
    int nn = (int)t.sq.size();
    if (j >= 1) {
        int base = a[j - 1];
        for (int ap = 0; ap < nn; ap++) {
            if (!t.adj[base][ap]) continue;
            std::vector<int> np;
            np.reserve(n + 1);
            for (int i = 0; i < j; i++) np.push_back(a[i]);
            np.push_back(ap);
            np.push_back(base);
            for (int i = j; i < n - 1; i++) np.push_back(a[i]);
            out.add(rsos_state(np), Scalar::numeric(t.sq[ap] / t.sq[base]));
        }
    } else {
        for (int ap = 0; ap < nn; ap++) {
            if (!t.adj[a[0]][ap]) continue;
            std::vector<int> np;
            np.reserve(n + 1);
            np.push_back(ap);
            for (int i = 0; i < n - 1; i++) np.push_back(a[i]);
            np.push_back(t.K[ap]);
            out.add(rsos_state(np), Scalar::numeric(t.sq[ap] / t.sq[a[0]]));
        }
    }
    return out;
}

}  // namespace

namespace {

struct ActCache {
    std::map<std::tuple<const FamilyDesc*, int, int, bool, BState>, ModuleVector> memo;
};
ActCache& act_cache() {
    static ActCache c;
    return c;
}

}  // namespace

ModuleVector act_c(const FamilyPtr& fam, int n, int j, const BState& s) {
    if (j < 0 || j > n - 1) throw std::invalid_argument("act_c: index out of range");
    auto key = std::make_tuple(fam.get(), n, j, false, s);
    auto& memo = act_cache().memo;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ModuleVector result = [&]() -> ModuleVector {
    if (!fam->tags.empty()) {
        auto base = std::make_shared<FamilyDesc>(*fam);
        TransformTag tag = base->tags.front();
        base->tags.erase(base->tags.begin());
        FamilyPtr ib = intern_family(std::move(base));
        int jj = tag == TransformTag::reflect && j != 0 ? n - j : j;
        ModuleVector r = act_c(ib, n, jj, s);
        if (tag == TransformTag::minus && j == 0) r = r * (-scalar_one_for(fam));
        r.family = fam;
        return r;
    }
    switch (fam->kind) {
        case FamilyKind::Wk:
        case FamilyKind::Wkx: return act_link(fam, c_gen(n, j), s, n - 2);
        case FamilyKind::Vacuum: return vac_act_c(fam, n, j, s);
        case FamilyKind::XXZ: return xxz_act_c(fam, n, j, s);
        case FamilyKind::RSOS: return rsos_act_c(fam, n, j, s);
        case FamilyKind::Fused: return fused_act_c(fam, n, j, s);
        case FamilyKind::LDiag: {
            auto [d, f] = compose(c_gen(n, j), ldiag_decode(fam, n, s));
            ModuleVector out = zero_vector(fam, n - 2);
            out.add(ldiag_state(d), f);
            return out;
        }
    }
    throw std::logic_error("act_c: unhandled family");
    }();
    memo.emplace(std::move(key), result);
    return result;
}

ModuleVector act_cdag(const FamilyPtr& fam, int n, int j, const BState& s) {
    if (j < 0 || j > n - 1) throw std::invalid_argument("act_cdag: index out of range");
    auto key = std::make_tuple(fam.get(), n, j, true, s);
    auto& memo = act_cache().memo;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ModuleVector result = [&]() -> ModuleVector {
    if (!fam->tags.empty()) {
        auto base = std::make_shared<FamilyDesc>(*fam);
        TransformTag tag = base->tags.front();
        base->tags.erase(base->tags.begin());
        FamilyPtr ib = intern_family(std::move(base));
        int jj = tag == TransformTag::reflect && j != 0 ? n - j : j;
        ModuleVector r = act_cdag(ib, n, jj, s);
        if (tag == TransformTag::minus && j == 0) r = r * (-scalar_one_for(fam));
        r.family = fam;
        return r;
    }
    switch (fam->kind) {
        case FamilyKind::Wk:
        case FamilyKind::Wkx: return act_link(fam, cdag_gen(n, j), s, n);
        case FamilyKind::Vacuum: return vac_act_cdag(fam, n, j, s);
        case FamilyKind::XXZ: return xxz_act_cdag(fam, n, j, s);
        case FamilyKind::RSOS: return rsos_act_cdag(fam, n, j, s);
        case FamilyKind::Fused: return fused_act_cdag(fam, n, j, s);
        case FamilyKind::LDiag: {
            auto [d, f] = compose(cdag_gen(n, j), ldiag_decode(fam, n - 2, s));
            ModuleVector out = zero_vector(fam, n);
            out.add(ldiag_state(d), f);
            return out;
        }
    }
    throw std::logic_error("act_cdag: unhandled family");
    }();
    memo.emplace(std::move(key), result);
    return result;
}

ModuleVector act_c(const FamilyPtr& fam, int n, int j, const ModuleVector& v) {
    ModuleVector out = zero_vector(fam, n - 2);
    for (const auto& [s, c] : v.terms) out += act_c(fam, n, j, s) * c;
    return out;
}

ModuleVector act_cdag(const FamilyPtr& fam, int n, int j, const ModuleVector& v) {
    ModuleVector out = zero_vector(fam, n);
    for (const auto& [s, c] : v.terms) out += act_cdag(fam, n, j, s) * c;
    return out;
}

ModuleVector act_word(const Word& w, const ModuleVector& v) {
    if (w.n_in() != v.n) throw std::invalid_argument("act_word: size mismatch");
    ModuleVector cur = v;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        cur = it->dag ? act_cdag(v.family, it->size, it->j, cur)
                      : act_c(v.family, it->size, it->j, cur);
    }
    return cur;
}

ModuleVector act_diagram(const AnnularDiagram& d, const ModuleVector& v) {
    if (d.n_in != v.n) throw std::invalid_argument("act_diagram: size mismatch");
    return act_word(diagram_to_word(d), v);
}

ModuleVector act_diagram(const DiagSum& sum, const ModuleVector& v) {
    ModuleVector out;
    bool first = true;
    for (const auto& [d, c] : sum) {
        ModuleVector t = act_diagram(d, v);
        Scalar cc = to_family_scalar(v.family, c);
        if (first) {
            out = t * cc;
            first = false;
        } else {
            out += t * cc;
        }
    }
    if (first) out = zero_vector(v.family, v.n);
    return out;
}

}  // namespace peritl
