#include "amtopo/simplicial.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace amtopo {

Simplex::Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}

Simplex::Simplex(std::vector<Vertex> vertices) : v_(std::move(vertices))
{
    if (v_.empty()) {
        throw std::invalid_argument("Simplex: no vertices");
    }
    std::sort(v_.begin(), v_.end());
    if (std::adjacent_find(v_.begin(), v_.end()) != v_.end()) {
        throw std::invalid_argument("Simplex: repeated vertex");
    }
}

Simplex Simplex::face(int i) const
{
    if (i < 0 || i > dim() || dim() == 0) {
        throw std::out_of_range("Simplex::face: bad index");
    }
    std::vector<Vertex> w;
    w.reserve(v_.size() - 1);
    for (int k = 0; k <= dim(); ++k) {
        if (k != i) {
            w.push_back(v_[static_cast<std::size_t>(k)]);
        }
    }
    return Simplex(Sorted{}, std::move(w));
}

Simplex Simplex::front(int p) const
{
    if (p < 0 || p > dim()) {
        throw std::out_of_range("Simplex::front: bad dimension");
    }
    return Simplex(Sorted{}, std::vector<Vertex>(v_.begin(), v_.begin() + p + 1));
}

Simplex Simplex::back(int q) const
{
    if (q < 0 || q > dim()) {
        throw std::out_of_range("Simplex::back: bad dimension");
    }
    return Simplex(Sorted{}, std::vector<Vertex>(v_.end() - q - 1, v_.end()));
}

bool Simplex::contains(Vertex v) const
{
    return std::binary_search(v_.begin(), v_.end(), v);
}

std::ostream& operator<<(std::ostream& os, const Simplex& s)
{
    os << '<';
    for (std::size_t i = 0; i < s.vertices().size(); ++i) {
        os << (i ? "," : "") << s.vertices()[i];
    }
    return os << '>';
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept
{
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Vertex v : s.vertices()) {
        h ^= std::hash<Vertex>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

SimplicialComplex SimplicialComplex::from_simplices(const std::vector<Simplex>& simplices)
{
    std::vector<std::set<Simplex>> sets;
    std::vector<Simplex> stack(simplices.begin(), simplices.end());
    while (!stack.empty()) {
        Simplex s = std::move(stack.back());
        stack.pop_back();
        auto q = static_cast<std::size_t>(s.dim());
        if (sets.size() <= q) {
            sets.resize(q + 1);
        }
        if (!sets[q].insert(s).second) {
            continue;
        }
        if (s.dim() > 0) {
            for (int i = 0; i <= s.dim(); ++i) {
                stack.push_back(s.face(i));
            }
        }
    }
    SimplicialComplex K;
    K.by_dim_.resize(sets.size());
    K.index_.resize(sets.size());
    for (std::size_t q = 0; q < sets.size(); ++q) {
        K.by_dim_[q].assign(sets[q].begin(), sets[q].end());
        K.index_[q].reserve(K.by_dim_[q].size());
        for (std::size_t i = 0; i < K.by_dim_[q].size(); ++i) {
            K.index_[q].emplace(K.by_dim_[q][i], static_cast<Index>(i));
        }
    }
    return K;
}

Index SimplicialComplex::count(int q) const
{
    if (q < 0 || q > dim()) {
        return 0;
    }
    return static_cast<Index>(by_dim_[static_cast<std::size_t>(q)].size());
}

std::size_t SimplicialComplex::size() const
{
    std::size_t n = 0;
    for (const auto& v : by_dim_) {
        n += v.size();
    }
    return n;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int q) const
{
    static const std::vector<Simplex> none;
    if (q < 0 || q > dim()) {
        return none;
    }
    return by_dim_[static_cast<std::size_t>(q)];
}

std::optional<Index> SimplicialComplex::index_of(const Simplex& s) const
{
    if (s.dim() > dim()) {
        return std::nullopt;
    }
    const auto& m = index_[static_cast<std::size_t>(s.dim())];
    auto it = m.find(s);
    if (it == m.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Vertex> SimplicialComplex::vertices() const
{
    std::vector<Vertex> out;
    for (const auto& s : simplices(0)) {
        out.push_back(s[0]);
    }
    return out;
}

bool SimplicialComplex::is_face_closed() const
{
    for (int q = 1; q <= dim(); ++q) {
        for (const auto& s : simplices(q)) {
            for (int i = 0; i <= q; ++i) {
                if (!contains(s.face(i))) {
                    return false;
                }
            }
        }
    }
    return true;
}

Integer Chain::coefficient(const Simplex& s) const
{
    auto it = terms_.find(s);
    return it == terms_.end() ? Integer(0) : it->second;
}

void Chain::add(const Simplex& s, const Integer& k)
{
    if (k == 0) {
        return;
    }
    if (s.dim() != dim_) {
        throw std::invalid_argument("Chain: simplex dimension does not match chain dimension");
    }
    auto [it, inserted] = terms_.emplace(s, k);
    if (!inserted) {
        it->second += k;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void Chain::axpy(const Integer& k, const Chain& other)
{
    for (const auto& [s, x] : other.terms_) {
        add(s, k * x);
    }
}

Chain operator+(const Chain& a, const Chain& b)
{
    Chain r = a;
    r.axpy(1, b);
    return r;
}

Chain operator-(const Chain& a, const Chain& b)
{
    Chain r = a;
    r.axpy(-1, b);
    return r;
}

Chain operator*(const Integer& k, const Chain& a)
{
    Chain r(a.dim());
    r.axpy(k, a);
    return r;
}

std::ostream& operator<<(std::ostream& os, const Chain& c)
{
    if (c.is_zero()) {
        return os << '0';
    }
    bool first = true;
    for (const auto& [s, x] : c.terms()) {
        if (x < 0) {
            os << (first ? "-" : " - ");
        } else if (!first) {
            os << " + ";
        }
        Integer a = abs(x);
        if (a != 1) {
            os << a << '*';
        }
        os << s;
        first = false;
    }
    return os;
}

Chain boundary(const Simplex& s)
{
    Chain c(s.dim() - 1);
    if (s.dim() == 0) {
        return c;
    }
    for (int i = 0; i <= s.dim(); ++i) {
        c.add(s.face(i), (i % 2 == 0) ? 1 : -1);
    }
    return c;
}

Chain boundary_chain(const Chain& c)
{
    Chain out(c.dim() - 1);
    for (const auto& [s, x] : c.terms()) {
        out.axpy(x, boundary(s));
    }
    return out;
}

SparseVector to_vector(const SimplicialComplex& K, const Chain& c)
{
    std::vector<SparseVector::Entry> e;
    e.reserve(c.size());
    for (const auto& [s, x] : c.terms()) {
        auto idx = K.index_of(s);
        if (!idx) {
            std::ostringstream msg;
            msg << "chain term " << s << " is not a simplex of the complex";
            throw std::invalid_argument(msg.str());
        }
        e.emplace_back(*idx, x);
    }
    return SparseVector::from_entries(std::move(e));
}

Chain from_vector(const SimplicialComplex& K, int q, const SparseVector& v)
{
    Chain c(q);
    const auto& s = K.simplices(q);
    for (const auto& [i, x] : v) {
        c.add(s.at(static_cast<std::size_t>(i)), x);
    }
    return c;
}

IntMatrix boundary_matrix(const SimplicialComplex& K, int q)
{
    Index rows = q > 0 ? K.count(q - 1) : 0;
    IntMatrix m(rows, K.count(q));
    if (q <= 0) {
        return m;
    }
    const auto& cols = K.simplices(q);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        m.column_mut(static_cast<Index>(j)) = to_vector(K, boundary(cols[j]));
    }
    return m;
}

namespace {

// Inverse of a unimodular matrix via its Smith form: U B V = I gives B^-1 = V U.
IntMatrix unimodular_inverse(const IntMatrix& B, const char* what)
{
    if (B.rows() != B.cols()) {
        throw std::invalid_argument(std::string("boundary_matrix: ") + what + " has the wrong cardinality");
    }
    SnfResult r = snf(B);
    if (r.rank_ones != B.rows()) {
        throw std::invalid_argument(std::string("boundary_matrix: ") + what + " is not a basis over the integers");
    }
    return r.V * r.U;
}

IntMatrix basis_matrix(const SimplicialComplex& K, int q, const std::vector<Chain>& basis)
{
    std::vector<SparseVector> cols;
    cols.reserve(basis.size());
    for (const auto& c : basis) {
        if (!c.is_zero() && c.dim() != q) {
            throw std::invalid_argument("boundary_matrix: basis chain of wrong dimension");
        }
        cols.push_back(to_vector(K, c));
    }
    return IntMatrix::from_columns(K.count(q), std::move(cols));
}

}  // namespace

IntMatrix boundary_matrix(const SimplicialComplex& K, int q, const std::vector<Chain>& row_basis,
                          const std::vector<Chain>& col_basis)
{
    IntMatrix C = basis_matrix(K, q, col_basis);
    unimodular_inverse(C, "column basis");
    if (q <= 0) {
        if (!row_basis.empty()) {
            throw std::invalid_argument("boundary_matrix: row basis must be empty for q = 0");
        }
        return IntMatrix(0, C.cols());
    }
    IntMatrix R = basis_matrix(K, q - 1, row_basis);
    IntMatrix Rinv = unimodular_inverse(R, "row basis");
    return Rinv * boundary_matrix(K, q) * C;
}

SimplicialComplex parse_complex(std::istream& in)
{
    std::vector<Simplex> simplices;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<Vertex> vs;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) {
                throw ParseError("invalid vertex id '" + tok + "'", lineno);
            }
            vs.push_back(v);
        }
        if (vs.empty()) {
            continue;
        }
        try {
            simplices.emplace_back(std::move(vs));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (simplices.empty()) {
        throw ParseError("no simplices in input", lineno == 0 ? 1 : lineno);
    }
    return SimplicialComplex::from_simplices(simplices);
}

void write_complex(std::ostream& out, const SimplicialComplex& K)
{
    for (int q = 0; q <= K.dim(); ++q) {
        for (const auto& s : K.simplices(q)) {
            for (std::size_t i = 0; i < s.vertices().size(); ++i) {
                out << (i ? " " : "") << s[i];
            }
            out << '\n';
        }
    }
}

}  // namespace amtopo
