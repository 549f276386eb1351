#pragma once

#include "ptsys/khm.hpp"
#include "ptsys/rank1.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ptsys::gen {

// Deterministic source of randomness. mt19937_64 has a pinned sequence and
// the range reduction below is hand-rolled, so streams are identical across
// platforms and library versions (std::uniform_int_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }
    std::int64_t range(std::int64_t lo, std::int64_t hi); // inclusive bounds
    std::size_t index(std::size_t n);                      // uniform in [0, n)
    bool coin() { return (raw() & 1u) != 0; }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Ring and module layer.

novikov::NovikovElement random_novikov(Rng& r, int max_terms, int max_denom, int max_abs);
RingElem random_elem(Rng& r, RingKind k);
// A unit with an exact inverse (a monomial over the series ring).
RingElem random_unit(Rng& r, RingKind k);

modalg::Homomorphism random_hom(Rng& r, const modalg::FreeModule& src,
                                const modalg::FreeModule& tgt, int max_abs);
// Product of shear steps and sign flips; determinant stays a unit.
modalg::Homomorphism random_iso(Rng& r, const modalg::FreeModule& m, int steps);

// ---------------------------------------------------------------------------
// Systems.

// Valid by construction: maps are V(j) V(i)^{-1} for a random family V,
// each scaled by a random unit of the spec's group.
systems::TransitiveSystem random_system(Rng& r, const RingSpec& spec,
                                        const std::vector<systems::Label>& indices,
                                        std::size_t rank, int steps);

// Random corruption, re-rolled until validate_system actually rejects it.
systems::TransitiveSystem inject_defect(Rng& r, systems::TransitiveSystem S);

// ---------------------------------------------------------------------------
// Mapping class layer.

mcg::TwistWord random_twist_word(Rng& r, const mcg::SurfaceModel& s, std::size_t len);
mcg::IntMat random_symplectic(Rng& r, const mcg::SurfaceModel& s, std::size_t len);
std::vector<Int> random_primitive(Rng& r, const mcg::SurfaceModel& s);
// Product of twists along curves orthogonal to eta; the result fixes eta.
mcg::IntMat random_eta_stabilizer(Rng& r, const mcg::SurfaceModel& s,
                                  const std::vector<Int>& eta, std::size_t len);

// ---------------------------------------------------------------------------
// Closures and comparison data.

closure::ClosureDescriptor make_closure(const std::string& id, const std::string& tag,
                                        int genus, std::vector<Int> eta, bool odd = false);
closure::ClosureDescriptor random_closure(Rng& r, const std::string& id,
                                          const std::string& tag, int genus,
                                          bool odd = false);
closure::FreeWord random_free_word(Rng& r, std::size_t len, const std::string& prefix);
closure::GluingData random_gluing(Rng& r, const closure::ClosureDescriptor& src,
                                  const closure::ClosureDescriptor& tgt, std::size_t len);
// Same endpoints and boundary maps, psi multiplied by a random eta stabilizer.
closure::GluingData alternative_psi(Rng& r, const closure::GluingData& g, std::size_t len);

closure::DiffeoTag random_diffeo(Rng& r, const mcg::SurfaceModel& s, std::size_t len,
                                 const std::string& prefix);

// A genus-step comparison built twice, through the canonical cut and through
// a cut moved by a random stabilizer of the marking curve; the two words are
// distinct but reduce to the same normal form.
struct GenusStepPair {
    closure::MorphismWord first;
    closure::MorphismWord second;
};
GenusStepPair random_genus_step_pair(Rng& r, const std::string& id_prefix);

// The two sides of the functor law: the map of a composed diffeomorphism tag
// against the composite of the two maps, over independently random gluings.
// The gluing for the composed tag is the one the law forces (conjugated
// complement word, composed boundary maps).
struct FunctorLawPair {
    closure::MorphismWord lhs;
    closure::MorphismWord rhs;
};
FunctorLawPair random_functor_pair(Rng& r, const std::string& id_prefix);

// ---------------------------------------------------------------------------
// Pools.

struct PoolEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    closure::PathStep step;
};

// Complete directed graph over mixed genus-2/genus-3 closures. Edge data is
// derived from one potential per node, so every cycle's comparison word
// reduces to the empty word.
struct ClosurePool {
    std::vector<closure::ClosureDescriptor> nodes;
    std::vector<PoolEdge> edges;

    const PoolEdge& edge(std::size_t from, std::size_t to) const;
};
ClosurePool random_pool(Rng& r, std::size_t genus2_count, std::size_t genus3_count,
                        const std::string& tag);

// Fixed four-closure alphabet of chainable elementary letters (segments,
// splices, comparison letters, one unit) for the exhaustive rewriting sweep.
struct LetterPool {
    std::vector<closure::ClosureDescriptor> closures;
    std::vector<closure::ElementaryMorphism> letters;
};
LetterPool confluence_pool(Rng& r);

// ---------------------------------------------------------------------------
// Rank-one data and KHM models.

// Units drawn for every key appearing in the given words: coboundary values
// per closure id, characters per label, signs per handle word, one unit per
// parent genus of a cut.
rank1::RankOneAssignment random_assignment(Rng& r, const RingSpec& spec,
                                           const std::vector<const closure::MorphismWord*>& words);

// Nesting DAG with a global minimum tag; per-tag systems are conjugates of a
// shared family, so transports telescope and all independence checks pass.
khm::KhmModel random_khm_model(Rng& r, std::size_t tag_count, std::size_t index_count,
                               std::size_t rank);

} // namespace ptsys::gen
