#pragma once

/*
 * Test-only oracles, independent of the library's computation paths.
 */

#include "stmod/gmod.hpp"

#include <map>
#include <random>
#include <vector>

namespace stmod::testing {

/* Monomial count in F[h10,h20,h21,h30^2]/(h10 h21) at bidegree (s,t), with
   generator bidegrees (1,1),(1,3),(1,6),(2,14).  Quotient basis = monomials
   with a = 0 or c = 0. */
inline int ext_d2_monomial_count(int s, int t)
{
    int count = 0;
    for (int a = 0; a * 1 <= t && a <= s; ++a)
        for (int b = 0; a + b <= s && a + 3 * b <= t; ++b)
            for (int c = 0; a + b + c <= s && a + 3 * b + 6 * c <= t; ++c) {
                if (a > 0 && c > 0)
                    continue;
                int rs = s - a - b - c;
                int rt = t - a - 3 * b - 6 * c;
                if (rs >= 0 && rs % 2 == 0 && rt == 7 * rs)  // (2,14) powers: d = rs/2
                    ++count;
            }
    return count;
}

/* Monomial enumeration under exponent bounds: dimension and top degree of the
   profile quotient, independently of build_algebra. */
inline std::pair<long long, int> profile_monomial_stats(const std::vector<int>& bounds)
{
    long long dim = 1;
    int top = 0;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        dim *= (1LL << bounds[i]);
        top += ((1 << bounds[i]) - 1) * ((1 << (i + 1)) - 1);
    }
    return {dim, top};
}

/* Brute-force free-summand search: look for a homogeneous element m with
   A.m free of full rank and a retraction M -> A.m, by exhausting candidate
   vectors degreewise.  Intended for dim(M) <= 2 dim(A) over tiny algebras. */
inline bool brute_force_has_free_summand(const GradedModule& M)
{
    const auto& A = *M.alg;
    for (int d = M.lo; d <= M.hi(); ++d) {
        int n = M.dim_at(d);
        if (n == 0 || n > 16)
            continue;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            F2Vec m(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i))
                    m.set(static_cast<std::size_t>(i));
            /* span of A.m must have dimension dim(A) */
            int span_dim = 0;
            std::vector<std::pair<int, F2Vec>> gens;  // (degree, vector) of e_b m
            for (int b = 0; b < A.dim; ++b) {
                F2Vec im = M.apply(b, d, m);
                if (im.any())
                    gens.emplace_back(d + A.degree[static_cast<std::size_t>(b)], im);
            }
            {
                std::map<int, RowSpace> spans;
                for (auto& [deg, v] : gens) {
                    auto it = spans.find(deg);
                    if (it == spans.end())
                        it = spans.emplace(deg, RowSpace(v.size())).first;
                    if (it->second.insert(v))
                        ++span_dim;
                }
            }
            if (span_dim != A.dim)
                continue;
            /* retraction M -> A.m exists iff the identity on A.m extends to a
               module map; solve for f in Hom(M, free rank 1 shifted) with
               f(e_b m) = b.gen */
            GradedModule F = free_module(M.alg, {d});
            auto homs = hom_basis(M, F, 0);
            /* find a combination restricting to the canonical iso on A.m */
            if (homs.empty())
                continue;
            /* constraints: f(e_b m) = e_b gen for each algebra basis b */
            std::size_t nh = homs.size();
            F2Matrix sys;
            std::vector<bool> rhs_bits;
            for (int b = 0; b < A.dim; ++b) {
                int db = A.degree[static_cast<std::size_t>(b)];
                F2Vec im = M.apply(b, d, m);
                /* coordinate of (gen, e_b) inside F at degree d+db */
                int off = b - A.degree_first[static_cast<std::size_t>(db)];
                for (int r = 0; r < F.dim_at(d + db); ++r) {
                    F2Vec row(nh);
                    for (std::size_t h = 0; h < nh; ++h) {
                        F2Vec img = homs[h].apply(d + db, im);
                        if (img.size() && img.get(static_cast<std::size_t>(r)))
                            row.set(h);
                    }
                    sys.append_row(row);
                    rhs_bits.push_back(r == off);
                }
            }
            F2Vec rhs(rhs_bits.size());
            for (std::size_t i = 0; i < rhs_bits.size(); ++i)
                if (rhs_bits[i])
                    rhs.set(i);
            if (solve(sys, rhs))
                return true;
        }
    }
    return false;
}

}  // namespace stmod::testing
