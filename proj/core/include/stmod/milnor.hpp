#pragma once

/*
 * Finite-dimensional graded Hopf algebras built from profile functions.
 *
 * A profile (h_1,...,h_k) presents the dual as the polynomial quotient
 * F[xi_1,...,xi_k] / (xi_i^{2^{h_i}}) with |xi_i| = 2^i - 1 and the Milnor
 * diagonal.  The primal algebra is constructed dual-first: its product is
 * read off the dual's diagonal and its coproduct off the dual's product, so
 * both sides stay exact without hand-rolled multiplication formulas.
 *
 * Basis elements Sq(r_1,...,r_k) are dual to the monomials xi^r, ordered by
 * degree then lexicographically on the exponent tuple.
 */

#include "stmod/f2.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace stmod {

struct Profile {
    std::vector<int> bounds;  // each h_i >= 1

    static Profile parse(std::string_view text);  // "3,2,1"
    std::string str() const;
    void validate() const;  // throws ValidationError

    /* Coordinatewise <=, missing entries treated as 0. */
    bool contained_in(const Profile& amb) const;
    bool operator==(const Profile&) const = default;
    bool operator<(const Profile& o) const { return bounds < o.bounds; }
};

using Expo = std::vector<int>;  // Milnor exponent tuple, length = profile length

int expo_degree(const Expo& e);
std::string expo_str(const Expo& e);  // "Sq(r1,...,rk)", trailing zeros trimmed

struct HopfAlgebra {
    Profile profile;
    int dim = 0;
    int top_degree = 0;

    std::vector<Expo> basis;  // sorted by (degree, lex)
    std::vector<int> degree;  // degree per basis index

    /* index ranges per degree: basis indices of degree d are
       [degree_first[d], degree_first[d+1]) */
    std::vector<int> degree_first;

    /* product: mult[i*dim+j] = e_i * e_j as a vector over the basis */
    std::vector<F2Vec> mult;

    /* coproduct: cop[k] = sorted pairs (i,j) with e_i (x) e_j appearing in D(e_k) */
    std::vector<std::vector<std::pair<int, int>>> cop;

    /* antipode per basis element */
    std::vector<F2Vec> antipode;

    /* socle_dual[j]: the basis-dual family b_j with lambda(e_i b_j) = delta_ij,
       where lambda picks the coefficient of the top basis element */
    std::vector<F2Vec> socle_dual;

    int unit() const { return 0; }
    int top() const { return dim - 1; }

    int index_of(const Expo& e) const;  // -1 when not a basis monomial
    int dim_at(int d) const
    {
        if (d < 0 || d > top_degree)
            return 0;
        return degree_first[d + 1] - degree_first[d];
    }

    const F2Vec& mul_basis(int i, int j) const { return mult[static_cast<std::size_t>(i) * dim + j]; }
    F2Vec multiply(const F2Vec& a, const F2Vec& b) const;
    F2Vec antipode_of(const F2Vec& a) const;

    /* Degree of a homogeneous element; throws if mixed or zero. */
    int element_degree(const F2Vec& a) const;

    bool same_as(const HopfAlgebra& o) const { return profile == o.profile; }

    /* Indecomposable generator indices: duals of xi_i^{2^j}, j < h_i.
       A generating set of the algebra, used wherever commuting with a
       generating family suffices. */
    std::vector<int> generator_indices() const;
};

/* Builds the algebra and verifies the Hopf axioms degreewise; throws
   ValidationError when the profile's relation ideal is not a Hopf ideal. */
std::shared_ptr<const HopfAlgebra> build_algebra(const Profile& p);

/* Memoized build_algebra. */
std::shared_ptr<const HopfAlgebra> algebra_cache(const Profile& p);

struct NamedElement {
    std::string name;
    int basis_index;  // all supported names resolve to single basis monomials
    F2Vec element;
};

/* Resolves Q0,Q1,Q2,P21,Sq1,Sq2,Sq4 or the general "Sq(r1,...,rk)" syntax.
   Throws ValidationError when the name is unknown or the element does not
   exist under the profile. */
NamedElement named_element(const HopfAlgebra& alg, std::string_view name);

/* True if the name parses and exists under the profile. */
bool has_named_element(const HopfAlgebra& alg, std::string_view name);

struct QuotientReport {
    Profile sub, amb;
    bool conormal = false;
    std::vector<Expo> quotient_dual_basis;  // monomials of the quotient dual, in ambient exponents
    bool exterior_rank_one = false;
    Expo tau;            // set when exterior_rank_one
    int tau_degree = 0;  // |tau|
    int sub_top_degree = 0;
};

/* Checks conormality directly (A B+ = B+ A degreewise) and describes the
   quotient dual.  Throws ValidationError unless sub is contained in amb. */
QuotientReport quotient_pair(const Profile& sub, const Profile& amb);

}  // namespace stmod
