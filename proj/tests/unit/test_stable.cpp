#include "stmod/moddoc.hpp"
#include "stmod/stable.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace stmod;

namespace {

GradedModule joker()
{
    return load_module_json(nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0, 1, 2, 3, 4],
      "actions": [
        {"op": "Sq1", "src": 0, "dst": [1]},
        {"op": "Sq1", "src": 3, "dst": [4]},
        {"op": "Sq2", "src": 0, "dst": [2]},
        {"op": "Sq2", "src": 1, "dst": [3]},
        {"op": "Sq2", "src": 2, "dst": [4]}
      ]
    })"));
}

/* random modules over the rank-2 exterior profile (1,1): degreewise dims with
   total <= max_dim, X (degree 1) and Y (degree 3) with X^2 = Y^2 = [X,Y] = 0 */
GradedModule random_exterior_module(std::mt19937_64& rng, int max_dim)
{
    auto E = algebra_cache(Profile::parse("1,1"));
    int span = 1 + static_cast<int>(rng() % 6);
    std::vector<int> dims(static_cast<std::size_t>(span) + 1, 0);
    int total = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_dim));
    for (int i = 0; i < total; ++i)
        dims[rng() % dims.size()]++;

    GradedModule M;
    M.alg = E;
    M.lo = 0;
    M.dims = dims;
    int q0 = named_element(*E, "Q0").basis_index;
    int q1 = named_element(*E, "Q1").basis_index;
    int q0q1 = E->index_of(Expo{1, 1});
    for (int attempt = 0; attempt < 400; ++attempt) {
        init_action_shape(M);
        auto scatter = [&](int b, int db) {
            for (int d = 0; d <= M.hi(); ++d)
                for (int c = 0; c < M.dim_at(d); ++c)
                    for (int r = 0; r < M.dim_at(d + db); ++r)
                        if (rng() & 1)
                            M.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)]
                                    [static_cast<std::size_t>(c)]
                                        .set(static_cast<std::size_t>(r));
        };
        scatter(q0, 1);
        scatter(q1, 3);
        /* rho(Q0 Q1) is forced; reject until the exterior relations hold */
        bool ok = true;
        for (int d = 0; d <= M.hi() && ok; ++d)
            for (int c = 0; c < M.dim_at(d) && ok; ++c) {
                F2Vec e(static_cast<std::size_t>(M.dim_at(d)));
                e.set(static_cast<std::size_t>(c));
                F2Vec xy = M.apply(q0, d + 3, M.apply(q1, d, e));
                F2Vec yx = M.apply(q1, d + 1, M.apply(q0, d, e));
                if (xy.size() != yx.size() || !(xy == yx))
                    ok = false;
                if (ok && M.apply(q0, d + 1, M.apply(q0, d, e)).any())
                    ok = false;
                if (ok && M.apply(q1, d + 3, M.apply(q1, d, e)).any())
                    ok = false;
                if (ok)
                    M.action[static_cast<std::size_t>(q0q1)][static_cast<std::size_t>(d)]
                            [static_cast<std::size_t>(c)] = xy;
            }
        if (!ok)
            continue;
        try {
            check_module_axioms(M);
            return M;
        }
        catch (const ValidationError&) {
            continue;
        }
    }
    return unit_module(E);
}

}  // namespace

TEST_CASE("reduction splits frees exactly")
{
    auto A1 = algebra_cache(Profile::parse("2,1"));
    GradedModule F = free_module(A1, {0});
    ReductionResult r = reduce(F);
    CHECK(r.free_rank == 1);
    CHECK(r.reduced.is_zero());

    GradedModule J = joker();
    ReductionResult rj = reduce(direct_sum(J, F));
    CHECK(rj.free_rank == 1);
    CHECK(rj.reduced.dims == J.dims);
    CHECK(stable_iso(rj.reduced, J) == Tri::Yes);

    /* idempotence */
    CHECK(reduce(rj.reduced).free_rank == 0);

    /* dual of a free rank 1 is free rank 1 */
    ReductionResult rd = reduce(dual(F));
    CHECK(rd.free_rank == 1);
    CHECK(rd.reduced.is_zero());
}

TEST_CASE("reduction witnesses the splitting M = reduced + free")
{
    GradedModule J = joker();
    auto A1 = J.alg;
    GradedModule M = direct_sum(free_module(A1, {1}), direct_sum(J, free_module(A1, {0, 2})));
    ReductionResult r = reduce(M);
    CHECK(r.free_rank == 3);
    CHECK(map_commutes(r.retraction, M, r.free_model));
    CHECK(map_commutes(r.inclusion, r.reduced, M));
    CHECK(M.total_dim() == r.reduced.total_dim() + r.free_rank * A1->dim);

    /* [inclusion | free-embedding] : reduced + free_model -> M is an isomorphism */
    GradedModule VS = direct_sum(r.reduced, r.free_model);
    ModuleMap glue;
    glue.t = 0;
    glue.src_lo = VS.lo;
    glue.cols.resize(VS.dims.size());
    for (int d = VS.lo; d <= VS.hi(); ++d) {
        auto& cols = glue.cols[static_cast<std::size_t>(d - VS.lo)];
        cols.assign(static_cast<std::size_t>(VS.dim_at(d)), F2Vec(static_cast<std::size_t>(M.dim_at(d))));
        int nred = r.reduced.dim_at(d);
        for (int c = 0; c < nred; ++c) {
            F2Vec e(static_cast<std::size_t>(nred));
            e.set(static_cast<std::size_t>(c));
            cols[static_cast<std::size_t>(c)] = r.inclusion.apply(d, e);
        }
        /* free part: basis (gen j, algebra b) -> e_b . m_j */
        int src = nred;
        for (std::size_t j = 0; j < r.free_gens.size(); ++j) {
            int gd = r.free_gens[j].first;
            int ad = d - gd;
            if (ad < 0 || ad > A1->top_degree || A1->dim_at(ad) == 0)
                continue;
            for (int b = A1->degree_first[static_cast<std::size_t>(ad)];
                 b < A1->degree_first[static_cast<std::size_t>(ad) + 1]; ++b, ++src)
                cols[static_cast<std::size_t>(src)] = M.apply(b, gd, r.free_gens[j].second);
        }
        CHECK(src == VS.dim_at(d));
    }
    CHECK(map_is_iso(glue, VS, M));
    CHECK(map_commutes(glue, VS, M));
}

TEST_CASE("the omega criterion agrees with brute-force summand search on random modules")
{
    std::mt19937_64 rng(0xfeed);
    for (int iter = 0; iter < 25; ++iter) {
        GradedModule M = random_exterior_module(rng, 8);  // dim <= 2 dim(alg)
        bool omega_says = reduce(M).free_rank > 0;
        bool brute_says = testing::brute_force_has_free_summand(M);
        CHECK(omega_says == brute_says);
    }
}

TEST_CASE("Margolis homology of the stated examples")
{
    GradedModule J = joker();
    auto A1 = J.alg;
    GradedModule S = unit_module(A1);

    MargolisTable hs = margolis_homology(S, "Q0");
    CHECK(hs.total() == 1);
    CHECK(hs.single_degree() == 0);

    MargolisTable hj0 = margolis_homology(J, "Q0");
    CHECK(hj0.total() == 1);
    CHECK(hj0.single_degree() == 2);

    MargolisTable hj1 = margolis_homology(J, "Q1");
    CHECK(hj1.total() == 1);
    CHECK(hj1.single_degree() == 2);

    GradedModule F = free_module(A1, {0, 3});
    CHECK(margolis_homology(F, "Q0").total() == 0);
    CHECK(margolis_homology(F, "Q1").total() == 0);

    /* a non-square-zero element is rejected */
    CHECK_THROWS_AS(margolis_homology(J, "Sq2"), ValidationError);
}

TEST_CASE("Margolis dimension identity and Kunneth on random modules")
{
    std::mt19937_64 rng(0xabcd);
    auto E = algebra_cache(Profile::parse("1,1"));
    for (int iter = 0; iter < 15; ++iter) {
        GradedModule M = random_exterior_module(rng, 6);
        GradedModule N = random_exterior_module(rng, 5);
        for (auto& el : primitive_square_zero_generators(*E)) {
            int dx = E->degree[static_cast<std::size_t>(el.basis_index)];
            MargolisTable tm = margolis_homology(M, el.element);
            int rank_total = 0;
            for (int d = M.lo - dx; d <= M.hi(); ++d) {
                if (M.dim_at(d) == 0 || M.dim_at(d + dx) == 0)
                    continue;
                F2Matrix X(static_cast<std::size_t>(M.dim_at(d + dx)),
                           static_cast<std::size_t>(M.dim_at(d)));
                for (int c = 0; c < M.dim_at(d); ++c) {
                    F2Vec e(static_cast<std::size_t>(M.dim_at(d)));
                    e.set(static_cast<std::size_t>(c));
                    for (std::size_t rr : M.apply_elem(el.element, d, e).set_bits())
                        X.set(rr, static_cast<std::size_t>(c));
                }
                rank_total += static_cast<int>(rank(X));
            }
            CHECK(M.total_dim() == 2 * rank_total + tm.total());

            MargolisTable tn = margolis_homology(N, el.element);
            MargolisTable tt = margolis_homology(tensor(M, N), el.element);
            std::map<int, int> conv;
            for (auto& [d1, v1] : tm.dims)
                for (auto& [d2, v2] : tn.dims)
                    conv[d1 + d2] += v1 * v2;
            std::map<int, int> nonzero;
            for (auto& [d, v] : conv)
                if (v)
                    nonzero[d] = v;
            CHECK(tt.dims == nonzero);
        }
    }
}

TEST_CASE("syzygies: dimensions, inverses and the group law")
{
    auto D2 = algebra_cache(Profile::parse("1,2,1"));
    SyzygyFactory f(D2);

    CHECK(is_unit_like(f.module(0, 0)));
    CHECK(f.module(1, 0).total_dim() == 15);

    GradedModule w = reduce(tensor(f.module(1, 0), f.module(-1, 0))).reduced;
    CHECK(is_unit_like(w));

    /* group law on representatives */
    GradedModule lhs = reduce(tensor(f.module(1, 0), f.module(1, 0))).reduced;
    CHECK(stable_iso(lhs, f.module(2, 0)) == Tri::Yes);
    GradedModule mixed = reduce(tensor(f.module(2, 1), f.module(-1, 2))).reduced;
    CHECK(stable_iso(mixed, f.module(1, 3)) == Tri::Yes);
}

TEST_CASE("stable isomorphism: frees vanish, syzygy tensors compose")
{
    auto A1 = algebra_cache(Profile::parse("2,1"));
    GradedModule J = joker();
    GradedModule F = free_module(A1, {2});
    CHECK(stable_iso(J, direct_sum(J, F)) == Tri::Yes);
    CHECK(stable_iso(direct_sum(J, F), J) == Tri::Yes);

    SyzygyFactory f(A1);
    GradedModule o1 = f.module(1, 0);
    CHECK(stable_iso(tensor(o1, o1), f.module(2, 0)) == Tri::Yes);

    /* the Joker is none of the shifted syzygies nearby */
    for (int n = -4; n <= 4; ++n)
        for (int m = -8; m <= 8; ++m)
            CHECK(stable_iso(J, f.module(n, m)) == Tri::No);
}

TEST_CASE("invertibility: syzygies and the Joker pass, padded modules fail")
{
    auto A1 = algebra_cache(Profile::parse("2,1"));
    GradedModule J = joker();
    SyzygyFactory f(A1);

    CHECK(invertible(f.module(2, 3)).invertible);
    CHECK(invertible(f.module(-1, 0)).invertible);

    PicardCertificate cj = invertible(J);
    CHECK(cj.invertible);
    CHECK(cj.filter_passed);
    CHECK(cj.witness_computed);
    CHECK(cj.witness_free_rank == 3);  // 25 = 3*8 + 1

    PicardCertificate bad = invertible(direct_sum(J, unit_module(A1)));
    CHECK_FALSE(bad.invertible);
}

TEST_CASE("classification recovers constructions and flags the Joker as exotic")
{
    auto D2 = algebra_cache(Profile::parse("1,2,1"));
    SyzygyFactory f(D2);
    PicardCertificate c = classify_picard(shift(f.module(2, 0), 5), 3, 8);
    CHECK(c.classified);
    CHECK_FALSE(c.exotic);
    CHECK(c.n == 2);
    CHECK(c.m == 5);

    PicardCertificate cs = classify_picard(unit_module(D2), 2, 2);
    CHECK(cs.n == 0);
    CHECK(cs.m == 0);

    GradedModule J = joker();
    PicardCertificate cj = classify_picard(J, 6, 12);
    CHECK(cj.exotic);
    CHECK(cj.scan_n == 6);
    CHECK(cj.scan_m == 12);

    CHECK_THROWS_AS(classify_picard(direct_sum(J, unit_module(J.alg)), 2, 2), ValidationError);
}

TEST_CASE("relative Picard membership")
{
    auto A1 = algebra_cache(Profile::parse("2,1"));
    GradedModule S = unit_module(A1);
    CHECK(relative_picard_member(S, Profile::parse("1")));
    CHECK(relative_picard_member(S, Profile::parse("1,1")));

    SyzygyFactory f(A1);
    CHECK_FALSE(relative_picard_member(f.module(1, 0), Profile::parse("1,1")));

    GradedModule J = joker();
    CHECK_FALSE(relative_picard_member(J, Profile::parse("1")));
}

TEST_CASE("stable invariance: verdicts survive adding frees")
{
    GradedModule J = joker();
    auto A1 = J.alg;
    GradedModule JF = direct_sum(J, free_module(A1, {1, 3}));
    CHECK(invertible(JF).invertible == invertible(J).invertible);
    PicardCertificate a = classify_picard(JF, 3, 6), b = classify_picard(J, 3, 6);
    CHECK(a.exotic == b.exotic);
    CHECK(margolis_homology(reduce(JF).reduced, "Q0").dims == margolis_homology(J, "Q0").dims);
}

TEST_CASE("restricting a free module stays free of the right rank")
{
    auto A2 = algebra_cache(Profile::parse("3,2,1"));
    GradedModule F = free_module(A2, {0});
    ReductionResult r = reduce(restrict_to(F, Profile::parse("2,2,1")));
    CHECK(r.free_rank == 2);  // 64 = 2 * 32
    CHECK(r.reduced.is_zero());
}
