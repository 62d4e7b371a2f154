#include "stmod/gmod.hpp"
#include "stmod/moddoc.hpp"

#include <doctest.h>

using namespace stmod;

namespace {

const char* kJokerDoc = R"({
  "algebra": {"profile": [2, 1]},
  "generators": [0, 1, 2, 3, 4],
  "actions": [
    {"op": "Sq1", "src": 0, "dst": [1]},
    {"op": "Sq1", "src": 3, "dst": [4]},
    {"op": "Sq2", "src": 0, "dst": [2]},
    {"op": "Sq2", "src": 1, "dst": [3]},
    {"op": "Sq2", "src": 2, "dst": [4]}
  ]
})";

GradedModule joker()
{
    return load_module_json(nlohmann::json::parse(kJokerDoc));
}

}  // namespace

TEST_CASE("the Joker document loads with dimension 5 and one basis vector per degree")
{
    GradedModule J = joker();
    CHECK(J.total_dim() == 5);
    CHECK(J.lo == 0);
    CHECK(J.dims == std::vector<int>{1, 1, 1, 1, 1});
    /* implied composite actions: Q1 = [Sq1,Sq2] maps 0 -> 3 and 1 -> 4 */
    auto q1 = named_element(*J.alg, "Q1");
    F2Vec e0(1);
    e0.set(0);
    CHECK(J.apply(q1.basis_index, 0, e0).get(0));
    CHECK(J.apply(q1.basis_index, 1, e0).get(0));
    CHECK(J.apply(q1.basis_index, 2, e0).none());
}

TEST_CASE("module documents reject degree-inconsistent actions")
{
    auto doc = nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0, 1, 2],
      "actions": [{"op": "Sq1", "src": 0, "dst": [2]}]
    })");
    CHECK_THROWS_AS(load_module_json(doc), ValidationError);
}

TEST_CASE("module documents reject generating sets that do not span the algebra")
{
    /* Sq2 could act (degrees 0 and 2 are present) but is not reachable from
       the declared Sq1 alone */
    auto doc = nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0, 1, 2],
      "actions": [{"op": "Sq1", "src": 0, "dst": [1]}]
    })");
    CHECK_THROWS_AS(load_module_json(doc), ValidationError);

    /* with no degree pair an omitted op can bridge, the zero completion is fine */
    auto sparse = nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0, 1],
      "actions": [{"op": "Sq1", "src": 0, "dst": [1]}]
    })");
    CHECK_NOTHROW(load_module_json(sparse));
}

TEST_CASE("module documents reject action entries that violate the axioms")
{
    /* Sq1 Sq1 = 0, so a chain 0 -> 1 -> 2 of Sq1 arrows is inconsistent;
       Sq2 actions are included so that the ops generate A(1) */
    auto doc = nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0, 1, 2],
      "actions": [
        {"op": "Sq1", "src": 0, "dst": [1]},
        {"op": "Sq1", "src": 1, "dst": [2]},
        {"op": "Sq2", "src": 0, "dst": [2]}
      ]
    })");
    CHECK_THROWS_AS(load_module_json(doc), ValidationError);
}

TEST_CASE("unit documents load to the monoidal unit")
{
    auto doc = nlohmann::json::parse(R"({
      "algebra": {"profile": [2, 1]},
      "generators": [0],
      "actions": []
    })");
    GradedModule S = load_module_json(doc);
    CHECK(is_unit_like(S));
}

TEST_CASE("free modules have the stated dimensions and spans")
{
    auto D2 = algebra_cache(Profile::parse("1,2,1"));
    CHECK(free_module(D2, {0}).total_dim() == 16);

    auto A1 = algebra_cache(Profile::parse("2,1"));
    GradedModule F = free_module(A1, {0, 5});
    CHECK(F.total_dim() == 16);
    CHECK(F.lo == 0);
    CHECK(F.hi() == 11);

    CHECK(free_module(A1, {}).is_zero());
    CHECK_NOTHROW(check_module_axioms(F));
}

TEST_CASE("the unit is a strict tensor unit and tensor dimensions multiply")
{
    GradedModule J = joker();
    GradedModule S = unit_module(J.alg);
    GradedModule SJ = tensor(S, J);
    CHECK(SJ.dims == J.dims);
    CHECK(SJ.lo == J.lo);
    CHECK(SJ.action == J.action);

    GradedModule JS = tensor(J, S);
    CHECK(JS.dims == J.dims);
    CHECK(JS.action == J.action);

    CHECK(tensor(J, J).total_dim() == 25);
}

TEST_CASE("primitives act diagonally on tensor products")
{
    GradedModule J = joker();
    GradedModule JJ = tensor(J, J);
    auto q0 = named_element(*J.alg, "Q0");
    /* Q0 (m (x) n) = Q0 m (x) n + m (x) Q0 n on the (0,0) basis vector */
    F2Vec e(1);
    e.set(0);
    F2Vec img = JJ.apply(q0.basis_index, 0, e);
    /* expected: x1 (x) x0 + x0 (x) x1, both in degree-1 slots */
    int i1 = tensor_index(J, J, 1, 0, 0, 0);
    int i2 = tensor_index(J, J, 0, 0, 1, 0);
    CHECK(img.count() == 2);
    CHECK(img.get(static_cast<std::size_t>(i1)));
    CHECK(img.get(static_cast<std::size_t>(i2)));
    CHECK_NOTHROW(check_module_axioms(JJ));
}

TEST_CASE("duals: unit, biduality, and contravariant monoidality")
{
    GradedModule J = joker();
    GradedModule S = unit_module(J.alg);
    CHECK(is_unit_like(dual(S)));

    GradedModule DJ = dual(J);
    CHECK(DJ.lo == -4);
    CHECK(DJ.total_dim() == 5);
    CHECK_NOTHROW(check_module_axioms(DJ));

    GradedModule DDJ = dual(DJ);
    CHECK(DDJ.lo == J.lo);
    CHECK(DDJ.dims == J.dims);
    CHECK(DDJ.action == J.action);  // chi is an involution, so biduality is the identity

    /* dual(M (x) N) = dual(M) (x) dual(N) via the basis bijection
       delta_{(m,n)} -> delta_m (x) delta_n */
    GradedModule A = J, B = shift(J, 1);
    GradedModule L = dual(tensor(A, B));
    GradedModule R = tensor(dual(A), dual(B));
    REQUIRE(L.dims == R.dims);
    ModuleMap perm;
    perm.t = 0;
    perm.src_lo = L.lo;
    perm.cols.resize(L.dims.size());
    GradedModule DA = dual(A), DB = dual(B), T = tensor(A, B);
    for (int k = L.lo; k <= L.hi(); ++k) {
        auto& cols = perm.cols[static_cast<std::size_t>(k - L.lo)];
        cols.assign(static_cast<std::size_t>(L.dim_at(k)), F2Vec(static_cast<std::size_t>(R.dim_at(k))));
        /* dual-of-tensor basis at k enumerates (T)_{-k} = blocks (d1, i, j) */
        int src = 0;
        for (int d1 = A.lo; d1 <= A.hi(); ++d1) {
            int d2 = -k - d1;
            for (int i = 0; i < A.dim_at(d1); ++i)
                for (int j = 0; j < B.dim_at(d2); ++j, ++src)
                    cols[static_cast<std::size_t>(src)].set(static_cast<std::size_t>(
                        tensor_index(DA, DB, -d1, i, -d2, j)));
        }
    }
    CHECK(map_commutes(perm, L, R));
    CHECK(map_is_iso(perm, L, R));
    (void)T;
}

TEST_CASE("shifts reindex exactly")
{
    GradedModule J = joker();
    GradedModule S = unit_module(J.alg);
    CHECK(shift(S, 3).lo == 3);
    CHECK(shift(S, 3).total_dim() == 1);
    GradedModule a = shift(shift(J, 2), 3), b = shift(J, 5);
    CHECK(a.lo == b.lo);
    CHECK(a.action == b.action);
    GradedModule c = shift(J, 0);
    CHECK(c.lo == J.lo);
}

TEST_CASE("direct sums add dimensions degreewise")
{
    GradedModule J = joker();
    GradedModule F = free_module(J.alg, {0});
    GradedModule JF = direct_sum(J, F);
    CHECK(JF.total_dim() == 13);
    for (int d = JF.lo; d <= JF.hi(); ++d)
        CHECK(JF.dim_at(d) == J.dim_at(d) + F.dim_at(d));
    CHECK(direct_sum(J, zero_module(J.alg)).dims == J.dims);
    CHECK_NOTHROW(check_module_axioms(JF));
}

TEST_CASE("restriction preserves the graded space and is monoidal")
{
    GradedModule J = joker();
    GradedModule R = restrict_to(J, Profile::parse("1"));
    CHECK(R.total_dim() == J.total_dim());
    CHECK(R.alg->dim == 2);
    /* Sq1 arrows survive: 0 -> 1 and 3 -> 4 */
    F2Vec e(1);
    e.set(0);
    CHECK(R.apply(1, 0, e).get(0));
    CHECK(R.apply(1, 3, e).get(0));
    CHECK(R.apply(1, 1, e).none());

    GradedModule L = restrict_to(tensor(J, J), Profile::parse("1,1"));
    GradedModule Rt = tensor(restrict_to(J, Profile::parse("1,1")), restrict_to(J, Profile::parse("1,1")));
    CHECK(L.dims == Rt.dims);
    CHECK(L.action == Rt.action);
}

TEST_CASE("stable hom dimensions: unit, frees, and the Joker endomorphisms")
{
    GradedModule J = joker();
    GradedModule S = unit_module(J.alg);
    CHECK(stable_hom_dim(S, S, 0) == 1);

    GradedModule F = free_module(J.alg, {0});
    for (int t = -3; t <= 6; ++t)
        CHECK(stable_hom_dim(F, J, t) == 0);

    CHECK(stable_hom_dim(J, J, 0) == 1);

    /* stably invisible summands do not change the answer */
    GradedModule JF = direct_sum(J, F);
    for (int t = 0; t <= 3; ++t)
        CHECK(stable_hom_dim(JF, J, t) == stable_hom_dim(J, J, t));
}

TEST_CASE("module documents round trip through save and load")
{
    GradedModule J = joker();
    auto doc = save_module_json(J);
    GradedModule J2 = load_module_json(doc);
    CHECK(J2.lo == J.lo);
    CHECK(J2.dims == J.dims);
    CHECK(J2.action == J.action);
}
