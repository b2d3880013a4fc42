// AM-models: a basis C of the chain groups together with a chain homotopy phi.
//
// The model keeps, per dimension q, an ordered list of basis chains together
// with their coordinate functionals (the rows of the inverse basis matrix).
// The differential is kept in Smith form with respect to C: every basis
// element is either a cycle or has boundary lambda * e for a single basis
// element e one dimension lower. Pairs with lambda = 1 carry the homotopy
// (phi(e) = a whenever d(a) = e); everything else forms the small complex M.

#ifndef AMTOPO_AM_MODEL_HPP
#define AMTOPO_AM_MODEL_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "amtopo/classical.hpp"
#include "amtopo/simplicial.hpp"

namespace amtopo {

/// Simplices with stable integer ids per dimension. Removed ids are never reused.
class SimplexRegistry
{
public:
    SimplexRegistry() = default;
    explicit SimplexRegistry(const SimplicialComplex& K);

    /// Adds s (its faces must already be present) and returns its id.
    Index insert(const Simplex& s);
    void erase(const Simplex& s);

    [[nodiscard]] std::optional<Index> find(const Simplex& s) const;
    [[nodiscard]] const Simplex& simplex(int q, Index id) const;
    [[nodiscard]] bool alive(int q, Index id) const;

    /// Number of live simplices of dimension q.
    [[nodiscard]] Index count(int q) const;
    /// Ids in use so far (live or not) for dimension q.
    [[nodiscard]] Index capacity(int q) const;
    /// Highest dimension with a live simplex, -1 when empty.
    [[nodiscard]] int dim() const;

    [[nodiscard]] SimplicialComplex to_complex() const;

    /// Simplex chain <-> id vector.
    [[nodiscard]] SparseVector to_ids(const Chain& c) const;
    [[nodiscard]] Chain to_chain(int q, const SparseVector& ids) const;

    /// Boundary of a chain given by ids.
    [[nodiscard]] SparseVector boundary(int q, const SparseVector& ids) const;
    /// (face id, sign) pairs of the simplex with the given id.
    [[nodiscard]] std::vector<std::pair<Index, int>> faces(int q, Index id) const;

private:
    struct Level
    {
        std::vector<Simplex> simplices;
        std::vector<char> alive;
        std::unordered_map<Simplex, Index, SimplexHash> lookup;
        Index live = 0;
    };
    std::vector<Level> levels_;
};

/// A family of sparse vectors with an over-approximating reverse index
/// (entry index -> members that may contain it).
class VectorFamily
{
public:
    [[nodiscard]] Index size() const { return static_cast<Index>(vecs_.size()); }
    [[nodiscard]] const SparseVector& operator[](Index k) const { return vecs_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] const std::vector<SparseVector>& vectors() const { return vecs_; }

    Index append(SparseVector v);
    void set(Index k, SparseVector v);
    /// vec[dst] += k * vec[src]
    void axpy(Index dst, const Integer& k, Index src);
    /// vec[dst] += k * v
    void axpy(Index dst, const Integer& k, const SparseVector& v);
    void negate(Index k);
    /// Moves the last member into slot k and shrinks by one.
    void swap_remove(Index k);
    /// Members containing entry `tau`, in increasing order.
    [[nodiscard]] std::vector<Index> containing(Index tau) const;
    /// Deletes entry `tau` from every member.
    void erase_entry(Index tau);
    /// Drops stale reverse-index records for `tau`.
    void compact(Index tau);

private:
    void note(Index k, const SparseVector& v);

    std::vector<SparseVector> vecs_;
    std::vector<std::vector<Index>> support_;
};

/// d(e_k) = lambda * e_partner (down) or d(e_partner) = lambda * e_k (up).
struct Link
{
    Index partner = -1;
    Integer lambda = 0;

    [[nodiscard]] bool present() const { return partner >= 0; }
    friend bool operator==(const Link&, const Link&) = default;
};

/// The five kinds of basis element of a model in Smith form.
enum class Role {
    PairedSource,   // d(x) = y with phi(y) = x: pi(x) = 0
    PairedTarget,   // x = d(phi(x)): pi(x) = 0
    TorsionSource,  // d(x) = lambda * y, lambda >= 2: x in M
    TorsionTarget,  // cycle, lambda * x is a boundary: x in M
    FreeCycle       // cycle, not hit: x in M
};

const char* to_string(Role r);

class AmModel
{
public:
    AmModel() = default;

    [[nodiscard]] int dim() const;
    [[nodiscard]] Index size(int q) const;
    [[nodiscard]] const SimplexRegistry& registry() const { return reg_; }
    [[nodiscard]] SimplicialComplex complex() const { return reg_.to_complex(); }
    [[nodiscard]] bool snf_form() const { return snf_form_; }

    /// Basis chain a_k of dimension q, as simplex ids and as a chain.
    [[nodiscard]] const SparseVector& basis_vector(int q, Index k) const;
    [[nodiscard]] Chain basis_chain(int q, Index k) const;
    /// Coordinate functional of a_k: coefficient of a_k in any chain, as a
    /// cochain on simplex ids.
    [[nodiscard]] const SparseVector& dual_vector(int q, Index k) const;
    [[nodiscard]] const std::string& name(int q, Index k) const;

    [[nodiscard]] const Link& down(int q, Index k) const;
    [[nodiscard]] const Link& up(int q, Index k) const;
    [[nodiscard]] Role role(int q, Index k) const;
    [[nodiscard]] bool in_M(int q, Index k) const;
    /// Indices of the M-elements of dimension q, increasing.
    [[nodiscard]] std::vector<Index> M(int q) const;

    /// Coordinates in C_q of a chain of simplices (ids or Chain).
    [[nodiscard]] SparseVector coordinates(int q, const SparseVector& ids) const;
    [[nodiscard]] SparseVector coordinates(const Chain& c) const;
    /// Simplex-id chain with the given coordinates.
    [[nodiscard]] SparseVector realize(int q, const SparseVector& coords) const;

    /// Differential in basis coordinates (C_q -> C_{q-1}).
    [[nodiscard]] SparseVector d(int q, const SparseVector& coords) const;
    /// phi in basis coordinates (C_q -> C_{q+1}).
    [[nodiscard]] SparseVector phi(int q, const SparseVector& coords) const;
    /// pi = id - phi d - d phi in basis coordinates.
    [[nodiscard]] SparseVector projection(int q, const SparseVector& coords) const;
    /// pi of a simplex chain, as a simplex chain.
    [[nodiscard]] Chain projection(const Chain& c) const;

private:
    friend class ModelEditor;

    struct Level
    {
        VectorFamily basis;
        VectorFamily dual;
        std::vector<Link> down;
        std::vector<Link> up;
        std::vector<std::string> names;
    };
    [[nodiscard]] const Level& level(int q) const;

    SimplexRegistry reg_;
    std::vector<Level> levels_;
    bool snf_form_ = true;
};

/// Optional replacement bases for the construction, one list of chains per
/// dimension (an empty list means the simplex basis). Each list must be a
/// basis of C_q(K).
struct InitialBasis
{
    std::vector<std::vector<Chain>> chains;
    std::vector<std::vector<std::string>> names;
};

struct BuildStats
{
    /// Per dimension: initial basis chains other than single simplices, and
    /// how many of them are still basis elements, unchanged, after the reduction.
    std::vector<Index> initial_special;
    std::vector<Index> initial_kept;
};

AmModel build_am_model(const SimplicialComplex& K);
AmModel build_am_model(const SimplicialComplex& K, const InitialBasis& base, BuildStats* stats = nullptr);

struct Generator
{
    Index element = -1;  // basis index in the model
    Chain chain;
    Integer order = 0;   // 0 for free generators
};

struct DimensionHomology
{
    Index betti = 0;
    std::vector<Integer> torsion;
    std::vector<Generator> free_generators;
    std::vector<Generator> torsion_generators;
};

struct HomologySummary
{
    std::vector<DimensionHomology> dims;

    [[nodiscard]] GroupSummary groups() const;
};

HomologySummary homology(const AmModel& m);

/// Chain contraction (f, g, phi) from C(K) onto M, all maps as matrices in
/// basis coordinates. Index q refers to the source dimension of each map.
struct ChainContraction
{
    std::vector<std::vector<Index>> M;  // M-element indices per dimension
    std::vector<IntMatrix> d;           // C_q -> C_{q-1}
    std::vector<IntMatrix> dM;          // M_q -> M_{q-1}
    std::vector<IntMatrix> f;           // C_q -> M_q
    std::vector<IntMatrix> g;           // M_q -> C_q
    std::vector<IntMatrix> phi;         // C_q -> C_{q+1}
};

ChainContraction derive_contraction(const AmModel& m);

/// Checks fd = d'f, dg = gd', fg = id, phi d + d phi = id - gf, phi phi = 0
/// and phi d phi = phi. Returns a description of every failure.
std::vector<std::string> check_contraction(const ChainContraction& c);

/// Full consistency check of a model against its simplices: basis/dual
/// inverse to each other, Smith form of d at the simplex level, the
/// definition's axioms and torsion conditions. Empty result means valid.
std::vector<std::string> validate(const AmModel& m);

/// Replaces the M-element h of dimension q by the homologous cycle x
/// (d x = 0, pi(x) = h). Throws std::invalid_argument when the hypotheses fail.
AmModel swap_generator(const AmModel& m, const Chain& x, Index h);
void swap_generator_in_place(AmModel& m, const Chain& x, Index h);

}  // namespace amtopo

#endif
