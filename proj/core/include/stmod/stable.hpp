#pragma once

/*
 * The stable category layer: free-summand reduction, Margolis homology,
 * stable isomorphism, syzygies, tensor-invertibility and Picard
 * classification.
 *
 * Reduction is a single split: the free rank equals the rank of the top
 * basis element's action, the chosen preimages generate a free direct
 * summand, and the retraction is assembled from the socle pairing of the
 * algebra, so no iteration or large solve is needed.
 */

#include "stmod/resolution.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stmod {

struct ReductionResult {
    GradedModule reduced;    // trimmed; omega acts as zero on it
    int free_rank = 0;
    GradedModule free_model;                       // free module on the split generators
    std::vector<std::pair<int, F2Vec>> free_gens;  // (degree, vector in M)
    ModuleMap retraction;                          // M -> free_model, identity on the split part
    ModuleMap inclusion;                           // reduced -> M, the kernel embedding
};

ReductionResult reduce(const GradedModule& M);

struct MargolisTable {
    int op_degree = 0;
    std::map<int, int> dims;  // nonzero H(M,x)_d entries

    int total() const
    {
        int n = 0;
        for (auto& [d, v] : dims)
            n += v;
        return n;
    }
    std::optional<int> single_degree() const
    {
        if (dims.size() == 1 && dims.begin()->second == 1)
            return dims.begin()->first;
        return std::nullopt;
    }
    bool operator==(const MargolisTable&) const = default;
};

/* H(M,x) = ker x / im x for a square-zero homogeneous x; throws unless x^2 = 0 */
MargolisTable margolis_homology(const GradedModule& M, const F2Vec& x);
MargolisTable margolis_homology(const GradedModule& M, const std::string& op_name);

/* the named square-zero elements available under the profile (Q0, Q1, Q2, P21) */
std::vector<NamedElement> square_zero_generators(const HopfAlgebra& alg);
/* the subset with primitive diagonal (the Qi); safe for Kunneth arguments */
std::vector<NamedElement> primitive_square_zero_generators(const HopfAlgebra& alg);

enum class Tri { No, Yes, Inconclusive };

struct StableIsoOptions {
    int enumerate_cap = 20;      // exhaust the hom space up to this dimension
    int random_tries = 10000;    // seeded fallback beyond the cap
    std::uint64_t seed = 1;
};

/* stable isomorphism of reduced models: dimension/Margolis filters, the exact
   tensor test against an invertible side, then a hom-space search */
Tri stable_iso(const GradedModule& M, const GradedModule& N, const StableIsoOptions& opts = {});

/* syzygies of the unit with a cached resolution per algebra */
class SyzygyFactory {
public:
    explicit SyzygyFactory(std::shared_ptr<const HopfAlgebra> alg) : alg_(std::move(alg)) {}

    /* reduced representative of the n-th syzygy, shifted up by m */
    GradedModule module(int n, int m);
    const GradedModule& positive(int n);  // n >= 1
    MargolisTable table(int n, const std::string& op);  // memoized Margolis table of module(n, 0)

private:
    std::shared_ptr<const HopfAlgebra> alg_;
    std::shared_ptr<Resolution> res_;
    int levels_ = -1;
    std::map<int, GradedModule> pos_, neg_;
    std::map<std::pair<int, std::string>, MargolisTable> tables_;
    GradedModule unit_;
    void ensure(int n);
};

GradedModule syzygy(std::shared_ptr<const HopfAlgebra> alg, int n, int m);

struct PicardCertificate {
    bool invertible = false;

    struct FilterEntry {
        std::string op;
        int total = 0;
        std::optional<int> degree;  // set when total == 1
    };
    std::vector<FilterEntry> margolis_filter;
    bool filter_passed = true;

    bool witness_computed = false;
    int witness_free_rank = 0;
    std::map<int, int> witness_dims;  // dims of reduce(M (x) dual M).reduced

    bool classified = false;
    bool exotic = false;
    int n = 0, m = 0;
    int scan_n = 0, scan_m = 0;
};

/* verdict true iff reduce(M (x) dual M).reduced is one-dimensional in degree 0;
   the Margolis filter short-circuits definitive failures */
PicardCertificate invertible(const GradedModule& M);

/* scans |n| <= scan_n, |m| <= scan_m for reduce(M (x) S^{-n,-m}) = S; candidates
   are pruned by reduced dimensions and Margolis tables before the tensor test */
PicardCertificate classify_picard(const GradedModule& M, int scan_n, int scan_m);

/* true iff the restriction along sub reduces to the unit */
bool relative_picard_member(const GradedModule& M, const Profile& sub);

}  // namespace stmod
