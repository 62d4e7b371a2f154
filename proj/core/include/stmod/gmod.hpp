#pragma once

/*
 * Finitely generated bounded graded modules over a profile algebra, with the
 * closed symmetric monoidal structure: tensor via the diagonal action, linear
 * duals via the antipode, shifts, sums and restriction along profile
 * inclusions.
 *
 * A module stores its full action tensor: one column list per algebra basis
 * element per degree, so every construction is pure matrix assembly.
 */

#include "stmod/milnor.hpp"

#include <memory>
#include <vector>

namespace stmod {

struct GradedModule {
    std::shared_ptr<const HopfAlgebra> alg;
    int lo = 0;
    std::vector<int> dims;  // dims[di] = dim in degree lo+di; empty = zero module

    /* action[b][di]: image columns of the basis of degree lo+di under e_b,
       each sized dim_at(lo+di+deg(e_b)) */
    std::vector<std::vector<std::vector<F2Vec>>> action;

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    int dim_at(int d) const
    {
        if (dims.empty() || d < lo || d > hi())
            return 0;
        return dims[static_cast<std::size_t>(d - lo)];
    }
    int total_dim() const;
    bool is_zero() const { return total_dim() == 0; }

    /* column image of basis vector c of degree d under e_b */
    const F2Vec& column(int b, int d, int c) const
    {
        return action[static_cast<std::size_t>(b)][static_cast<std::size_t>(d - lo)][static_cast<std::size_t>(c)];
    }
    /* e_b . v for v in degree d */
    F2Vec apply(int b, int d, const F2Vec& v) const;
    /* a . v for homogeneous a */
    F2Vec apply_elem(const F2Vec& a, int d, const F2Vec& v) const;

    /* drop zero-dimensional boundary degrees (canonical form for comparisons) */
    void trim();
};

/* allocate the action tensor for the module's (alg, lo, dims), unit = identity */
void init_action_shape(GradedModule& M);

GradedModule zero_module(std::shared_ptr<const HopfAlgebra> alg);
/* the monoidal unit: one dimension in degree 0, trivial positive action */
GradedModule unit_module(std::shared_ptr<const HopfAlgebra> alg);
GradedModule free_module(std::shared_ptr<const HopfAlgebra> alg, const std::vector<int>& gen_degrees);

GradedModule tensor(const GradedModule& M, const GradedModule& N);
GradedModule dual(const GradedModule& M);
GradedModule shift(const GradedModule& M, int m);
GradedModule direct_sum(const GradedModule& M, const GradedModule& N);

/* forgetful functor along a profile inclusion; the underlying graded space is
   unchanged and sub-basis actions are selected */
GradedModule restrict_to(const GradedModule& M, const Profile& sub);

/* flat index of m_i (x) n_j inside (M (x) N)_{d1+d2}; blocks ordered by d1 */
int tensor_index(const GradedModule& M, const GradedModule& N, int d1, int i, int d2, int j);

/* one-dimensional in degree 0 */
bool is_unit_like(const GradedModule& M);

/* unit acts as identity and rho(a) rho(b) = rho(ab) on all basis pairs */
void check_module_axioms(const GradedModule& M);

/* minimal generators: per-degree complements of A+ M, with their lifts */
std::vector<std::pair<int, F2Vec>> minimal_generators(const GradedModule& M);

/* a degree-t module map, stored as per-degree column images */
struct ModuleMap {
    int t = 0;
    int src_lo = 0;
    std::vector<std::vector<F2Vec>> cols;  // cols[di][c] over target degree src_lo+di+t

    F2Vec apply(int d, const F2Vec& v) const;
};

/* checks f(a v) = a f(v) on algebra generators */
bool map_commutes(const ModuleMap& f, const GradedModule& M, const GradedModule& N);
/* degreewise bijection test */
bool map_is_iso(const ModuleMap& f, const GradedModule& M, const GradedModule& N);

/* basis of the space of degree-t module maps M -> N */
std::vector<ModuleMap> hom_basis(const GradedModule& M, const GradedModule& N, int t);

/* free module on the minimal generators of N together with the surjection onto N */
std::pair<GradedModule, ModuleMap> free_cover(const GradedModule& N);

/* dim of degree-t maps M -> N modulo those factoring through a projective */
int stable_hom_dim(const GradedModule& M, const GradedModule& N, int t);

}  // namespace stmod
