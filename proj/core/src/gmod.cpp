#include "stmod/gmod.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace stmod {

int GradedModule::total_dim() const
{
    int n = 0;
    for (int d : dims)
        n += d;
    return n;
}

F2Vec GradedModule::apply(int b, int d, const F2Vec& v) const
{
    int db = alg->degree[static_cast<std::size_t>(b)];
    F2Vec out(static_cast<std::size_t>(dim_at(d + db)));
    if (d < lo || d > hi())
        return out;
    for (std::size_t c : v.set_bits())
        out ^= column(b, d, static_cast<int>(c));
    return out;
}

F2Vec GradedModule::apply_elem(const F2Vec& a, int d, const F2Vec& v) const
{
    int da = alg->element_degree(a);
    F2Vec out(static_cast<std::size_t>(dim_at(d + da)));
    for (std::size_t b : a.set_bits())
        out ^= apply(static_cast<int>(b), d, v);
    return out;
}

void GradedModule::trim()
{
    std::size_t first = 0, last = dims.size();
    while (first < last && dims[first] == 0)
        ++first;
    while (last > first && dims[last - 1] == 0)
        --last;
    if (first == 0 && last == dims.size())
        return;
    lo += static_cast<int>(first);
    dims = std::vector<int>(dims.begin() + first, dims.begin() + last);
    for (auto& act : action)
        act = std::vector<std::vector<F2Vec>>(act.begin() + first, act.begin() + last);
}

/* allocate an action tensor of the right ragged shape, unit = identity */
void init_action_shape(GradedModule& M)
{
    const auto& A = *M.alg;
    M.action.assign(static_cast<std::size_t>(A.dim), {});
    for (int b = 0; b < A.dim; ++b) {
        auto& act = M.action[static_cast<std::size_t>(b)];
        act.resize(M.dims.size());
        int db = A.degree[static_cast<std::size_t>(b)];
        for (std::size_t di = 0; di < M.dims.size(); ++di) {
            int d = M.lo + static_cast<int>(di);
            act[di].assign(static_cast<std::size_t>(M.dims[di]),
                           F2Vec(static_cast<std::size_t>(M.dim_at(d + db))));
        }
    }
    for (std::size_t di = 0; di < M.dims.size(); ++di)
        for (int c = 0; c < M.dims[di]; ++c)
            M.action[0][di][static_cast<std::size_t>(c)].set(static_cast<std::size_t>(c));
}

GradedModule zero_module(std::shared_ptr<const HopfAlgebra> alg)
{
    GradedModule M;
    M.alg = std::move(alg);
    init_action_shape(M);
    return M;
}

GradedModule unit_module(std::shared_ptr<const HopfAlgebra> alg)
{
    GradedModule M;
    M.alg = std::move(alg);
    M.lo = 0;
    M.dims = {1};
    init_action_shape(M);
    return M;
}

GradedModule free_module(std::shared_ptr<const HopfAlgebra> alg, const std::vector<int>& gen_degrees)
{
    GradedModule M;
    M.alg = alg;
    if (gen_degrees.empty()) {
        init_action_shape(M);
        return M;
    }
    const auto& A = *alg;
    int glo = *std::min_element(gen_degrees.begin(), gen_degrees.end());
    int ghi = *std::max_element(gen_degrees.begin(), gen_degrees.end());
    M.lo = glo;
    M.dims.assign(static_cast<std::size_t>(ghi + A.top_degree - glo) + 1, 0);

    /* basis at degree d: blocks per generator (ascending), inner = algebra basis */
    auto block_dims = [&](int d) {
        std::vector<int> out;
        for (int gd : gen_degrees)
            out.push_back(A.dim_at(d - gd));
        return out;
    };
    for (std::size_t di = 0; di < M.dims.size(); ++di) {
        int d = M.lo + static_cast<int>(di);
        for (int bd : block_dims(d))
            M.dims[di] += bd;
    }
    init_action_shape(M);

    for (int b = 0; b < A.dim; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        for (std::size_t di = 0; di < M.dims.size(); ++di) {
            int d = M.lo + static_cast<int>(di);
            if (M.dims[di] == 0 || M.dim_at(d + db) == 0)
                continue;
            auto tgt_blocks = block_dims(d + db);
            std::vector<int> tgt_off(gen_degrees.size(), 0);
            for (std::size_t j = 1; j < gen_degrees.size(); ++j)
                tgt_off[j] = tgt_off[j - 1] + tgt_blocks[j - 1];
            int src = 0;
            for (std::size_t j = 0; j < gen_degrees.size(); ++j) {
                int ad = d - gen_degrees[j];
                if (A.dim_at(ad) == 0)
                    continue;
                int afirst = A.degree_first[static_cast<std::size_t>(ad)];
                for (int ai = 0; ai < A.dim_at(ad); ++ai, ++src) {
                    const F2Vec& prod = A.mul_basis(b, afirst + ai);
                    auto& col = M.action[static_cast<std::size_t>(b)][di][static_cast<std::size_t>(src)];
                    for (std::size_t kbit : prod.set_bits()) {
                        int kdeg = A.degree[kbit];
                        int inner = static_cast<int>(kbit) - A.degree_first[static_cast<std::size_t>(kdeg)];
                        col.set(static_cast<std::size_t>(tgt_off[j] + inner));
                    }
                }
            }
        }
    }
    return M;
}

int tensor_index(const GradedModule& M, const GradedModule& N, int d1, int i, int d2, int j)
{
    int d = d1 + d2;
    int off = 0;
    for (int e1 = M.lo; e1 < d1; ++e1)
        off += M.dim_at(e1) * N.dim_at(d - e1);
    return off + i * N.dim_at(d2) + j;
}

GradedModule tensor(const GradedModule& M, const GradedModule& N)
{
    if (!(M.alg->profile == N.alg->profile))
        throw ValidationError("tensor: operands live over different algebras");
    GradedModule R;
    R.alg = M.alg;
    if (M.is_zero() || N.is_zero()) {
        init_action_shape(R);
        return R;
    }
    R.lo = M.lo + N.lo;
    R.dims.assign(static_cast<std::size_t>(M.hi() + N.hi() - R.lo) + 1, 0);
    for (int d1 = M.lo; d1 <= M.hi(); ++d1)
        for (int d2 = N.lo; d2 <= N.hi(); ++d2)
            R.dims[static_cast<std::size_t>(d1 + d2 - R.lo)] += M.dim_at(d1) * N.dim_at(d2);
    init_action_shape(R);

    const auto& A = *M.alg;
    for (int b = 1; b < A.dim; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        const auto& pairs = A.cop[static_cast<std::size_t>(b)];
        for (int d1 = M.lo; d1 <= M.hi(); ++d1) {
            if (M.dim_at(d1) == 0)
                continue;
            for (int d2 = N.lo; d2 <= N.hi(); ++d2) {
                if (N.dim_at(d2) == 0)
                    continue;
                int d = d1 + d2;
                if (R.dim_at(d + db) == 0)
                    continue;
                auto& cols = R.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(d - R.lo)];
                for (int i = 0; i < M.dim_at(d1); ++i)
                    for (int j = 0; j < N.dim_at(d2); ++j) {
                        auto& col = cols[static_cast<std::size_t>(tensor_index(M, N, d1, i, d2, j))];
                        for (auto [b1, b2] : pairs) {
                            int db1 = A.degree[static_cast<std::size_t>(b1)];
                            int db2 = A.degree[static_cast<std::size_t>(b2)];
                            if (M.dim_at(d1 + db1) == 0 || N.dim_at(d2 + db2) == 0)
                                continue;
                            const F2Vec& u = M.column(b1, d1, i);
                            const F2Vec& v = N.column(b2, d2, j);
                            for (std::size_t x : u.set_bits())
                                for (std::size_t y : v.set_bits())
                                    col.flip(static_cast<std::size_t>(tensor_index(
                                        M, N, d1 + db1, static_cast<int>(x), d2 + db2, static_cast<int>(y))));
                        }
                    }
            }
        }
    }
    return R;
}

GradedModule dual(const GradedModule& M)
{
    GradedModule D;
    D.alg = M.alg;
    if (M.is_zero()) {
        init_action_shape(D);
        return D;
    }
    D.lo = -M.hi();
    D.dims.assign(M.dims.size(), 0);
    for (std::size_t di = 0; di < M.dims.size(); ++di)
        D.dims[di] = M.dim_at(-(D.lo + static_cast<int>(di)));
    init_action_shape(D);

    const auto& A = *M.alg;
    for (int b = 1; b < A.dim; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        const F2Vec& chi = A.antipode[static_cast<std::size_t>(b)];
        for (int k = D.lo; k <= D.hi(); ++k) {
            int src_dim = D.dim_at(k);          // = dim M_{-k}
            int tgt_dim = D.dim_at(k + db);     // = dim M_{-k-db}
            if (src_dim == 0 || tgt_dim == 0)
                continue;
            int md = -k - db;
            /* (b . f)(x) = f(chi(b) x); transpose the matrix of chi(b) on M_md */
            std::vector<F2Vec> chi_cols;
            chi_cols.reserve(static_cast<std::size_t>(tgt_dim));
            for (int x = 0; x < tgt_dim; ++x) {
                F2Vec ex(static_cast<std::size_t>(tgt_dim));
                ex.set(static_cast<std::size_t>(x));
                chi_cols.push_back(M.apply_elem(chi, md, ex));
            }
            auto& cols = D.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(k - D.lo)];
            for (int c = 0; c < src_dim; ++c)
                for (int x = 0; x < tgt_dim; ++x)
                    if (chi_cols[static_cast<std::size_t>(x)].get(static_cast<std::size_t>(c)))
                        cols[static_cast<std::size_t>(c)].set(static_cast<std::size_t>(x));
        }
    }
    return D;
}

GradedModule shift(const GradedModule& M, int m)
{
    GradedModule R = M;
    R.lo += m;
    return R;
}

GradedModule direct_sum(const GradedModule& M, const GradedModule& N)
{
    if (!(M.alg->profile == N.alg->profile))
        throw ValidationError("direct_sum: operands live over different algebras");
    if (M.is_zero())
        return N;
    if (N.is_zero())
        return M;
    GradedModule R;
    R.alg = M.alg;
    R.lo = std::min(M.lo, N.lo);
    int rhi = std::max(M.hi(), N.hi());
    R.dims.assign(static_cast<std::size_t>(rhi - R.lo) + 1, 0);
    for (int d = R.lo; d <= rhi; ++d)
        R.dims[static_cast<std::size_t>(d - R.lo)] = M.dim_at(d) + N.dim_at(d);
    init_action_shape(R);

    const auto& A = *M.alg;
    for (int b = 1; b < A.dim; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        for (int d = R.lo; d <= rhi; ++d) {
            if (R.dim_at(d) == 0 || R.dim_at(d + db) == 0)
                continue;
            auto& cols = R.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(d - R.lo)];
            int mt = M.dim_at(d + db);
            for (int c = 0; c < M.dim_at(d); ++c) {
                const F2Vec& u = M.column(b, d, c);
                for (std::size_t x : u.set_bits())
                    cols[static_cast<std::size_t>(c)].set(x);
            }
            for (int c = 0; c < N.dim_at(d); ++c) {
                const F2Vec& u = N.column(b, d, c);
                for (std::size_t x : u.set_bits())
                    cols[static_cast<std::size_t>(M.dim_at(d) + c)].set(static_cast<std::size_t>(mt) + x);
            }
        }
    }
    return R;
}

GradedModule restrict_to(const GradedModule& M, const Profile& sub)
{
    if (!sub.contained_in(M.alg->profile))
        throw ValidationError(fmt::format("restrict: profile ({}) is not contained in profile ({})", sub.str(),
                                          M.alg->profile.str()));
    auto B = algebra_cache(sub);
    GradedModule R;
    R.alg = B;
    R.lo = M.lo;
    R.dims = M.dims;
    R.action.resize(static_cast<std::size_t>(B->dim));
    for (int bs = 0; bs < B->dim; ++bs) {
        Expo padded = B->basis[static_cast<std::size_t>(bs)];
        padded.resize(M.alg->profile.bounds.size(), 0);
        int ba = M.alg->index_of(padded);
        R.action[static_cast<std::size_t>(bs)] = M.action[static_cast<std::size_t>(ba)];
    }
    return R;
}

bool is_unit_like(const GradedModule& M)
{
    return M.total_dim() == 1 && M.dim_at(0) == 1;
}

void check_module_axioms(const GradedModule& M)
{
    const auto& A = *M.alg;
    for (int d = M.lo; d <= M.hi(); ++d)
        for (int c = 0; c < M.dim_at(d); ++c) {
            F2Vec want(static_cast<std::size_t>(M.dim_at(d)));
            want.set(static_cast<std::size_t>(c));
            if (!(M.column(0, d, c) == want))
                throw ValidationError("module axiom violated: unit does not act as identity");
        }
    for (int i = 0; i < A.dim; ++i)
        for (int j = 0; j < A.dim; ++j) {
            int di = A.degree[static_cast<std::size_t>(i)], dj = A.degree[static_cast<std::size_t>(j)];
            const F2Vec& prod = A.mul_basis(i, j);
            for (int d = M.lo; d <= M.hi(); ++d) {
                if (M.dim_at(d) == 0 || M.dim_at(d + di + dj) == 0)
                    continue;
                for (int c = 0; c < M.dim_at(d); ++c) {
                    F2Vec lhs = M.dim_at(d + dj) ? M.apply(i, d + dj, M.column(j, d, c))
                                                 : F2Vec(static_cast<std::size_t>(M.dim_at(d + di + dj)));
                    F2Vec rhs(static_cast<std::size_t>(M.dim_at(d + di + dj)));
                    for (std::size_t kbit : prod.set_bits())
                        rhs ^= M.column(static_cast<int>(kbit), d, c);
                    if (!(lhs == rhs))
                        throw ValidationError(fmt::format(
                            "module axiom violated: rho({}) rho({}) != rho({}*{}) at degree {}",
                            expo_str(A.basis[static_cast<std::size_t>(i)]),
                            expo_str(A.basis[static_cast<std::size_t>(j)]),
                            expo_str(A.basis[static_cast<std::size_t>(i)]),
                            expo_str(A.basis[static_cast<std::size_t>(j)]), d));
                }
            }
        }
}

std::vector<std::pair<int, F2Vec>> minimal_generators(const GradedModule& M)
{
    const auto& A = *M.alg;
    std::vector<int> gens = A.generator_indices();
    std::vector<std::pair<int, F2Vec>> out;
    for (int d = M.lo; d <= M.hi(); ++d) {
        if (M.dim_at(d) == 0)
            continue;
        RowSpace span(static_cast<std::size_t>(M.dim_at(d)));
        for (int g : gens) {
            int dg = A.degree[static_cast<std::size_t>(g)];
            for (int c = 0; c < M.dim_at(d - dg); ++c)
                span.insert(M.column(g, d - dg, c));
        }
        for (int c = 0; c < M.dim_at(d); ++c) {
            F2Vec e(static_cast<std::size_t>(M.dim_at(d)));
            e.set(static_cast<std::size_t>(c));
            if (span.insert(e))
                out.emplace_back(d, std::move(e));
        }
    }
    return out;
}

F2Vec ModuleMap::apply(int d, const F2Vec& v) const
{
    std::size_t di = static_cast<std::size_t>(d - src_lo);
    if (d < src_lo || di >= cols.size() || cols[di].empty())
        return F2Vec(0);
    F2Vec out(cols[di][0].size());
    for (std::size_t c : v.set_bits())
        out ^= cols[di][c];
    return out;
}

bool map_commutes(const ModuleMap& f, const GradedModule& M, const GradedModule& N)
{
    const auto& A = *M.alg;
    for (int g : A.generator_indices()) {
        int dg = A.degree[static_cast<std::size_t>(g)];
        for (int d = M.lo; d <= M.hi(); ++d) {
            if (M.dim_at(d) == 0)
                continue;
            for (int c = 0; c < M.dim_at(d); ++c) {
                F2Vec ec(static_cast<std::size_t>(M.dim_at(d)));
                ec.set(static_cast<std::size_t>(c));
                F2Vec lhs = M.dim_at(d + dg) ? f.apply(d + dg, M.apply(g, d, ec))
                                             : F2Vec(static_cast<std::size_t>(N.dim_at(d + dg + f.t)));
                if (lhs.size() == 0)
                    lhs = F2Vec(static_cast<std::size_t>(N.dim_at(d + dg + f.t)));
                F2Vec fv = f.apply(d, ec);
                F2Vec rhs = fv.size() ? N.apply(g, d + f.t, fv)
                                      : F2Vec(static_cast<std::size_t>(N.dim_at(d + dg + f.t)));
                if (!(lhs == rhs))
                    return false;
            }
        }
    }
    return true;
}

bool map_is_iso(const ModuleMap& f, const GradedModule& M, const GradedModule& N)
{
    for (int d = std::min(M.lo, N.lo - f.t); d <= std::max(M.hi(), N.hi() - f.t); ++d)
        if (M.dim_at(d) != N.dim_at(d + f.t))
            return false;
    for (int d = M.lo; d <= M.hi(); ++d) {
        int n = M.dim_at(d);
        if (n == 0)
            continue;
        F2Matrix mat(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) {
            F2Vec ec(static_cast<std::size_t>(n));
            ec.set(static_cast<std::size_t>(c));
            F2Vec img = f.apply(d, ec);
            for (std::size_t r : img.set_bits())
                mat.set(r, static_cast<std::size_t>(c));
        }
        if (rank(mat) != static_cast<std::size_t>(n))
            return false;
    }
    return true;
}

namespace {

    struct HomLayout {
        int t;
        std::vector<int> offset;  // per src degree-index, -1 when no block
        int total = 0;
        const GradedModule* M;
        const GradedModule* N;

        HomLayout(const GradedModule& M_, const GradedModule& N_, int t_) : t(t_), M(&M_), N(&N_)
        {
            offset.assign(M_.dims.size(), -1);
            for (std::size_t di = 0; di < M_.dims.size(); ++di) {
                int d = M_.lo + static_cast<int>(di);
                if (M_.dim_at(d) > 0 && N_.dim_at(d + t) > 0) {
                    offset[di] = total;
                    total += M_.dim_at(d) * N_.dim_at(d + t);
                }
            }
        }
        int index(int d, int c, int r) const
        {
            std::size_t di = static_cast<std::size_t>(d - M->lo);
            return offset[di] + c * N->dim_at(d + t) + r;
        }
        bool has_block(int d) const
        {
            return d >= M->lo && d <= M->hi() && offset[static_cast<std::size_t>(d - M->lo)] >= 0;
        }
    };

    ModuleMap map_from_flat(const HomLayout& L, const F2Vec& flat)
    {
        ModuleMap f;
        f.t = L.t;
        f.src_lo = L.M->lo;
        f.cols.resize(L.M->dims.size());
        for (std::size_t di = 0; di < L.M->dims.size(); ++di) {
            int d = L.M->lo + static_cast<int>(di);
            int nd = L.N->dim_at(d + L.t);
            f.cols[di].assign(static_cast<std::size_t>(L.M->dim_at(d)), F2Vec(static_cast<std::size_t>(nd)));
            if (!L.has_block(d))
                continue;
            for (int c = 0; c < L.M->dim_at(d); ++c)
                for (int r = 0; r < nd; ++r)
                    if (flat.get(static_cast<std::size_t>(L.index(d, c, r))))
                        f.cols[di][static_cast<std::size_t>(c)].set(static_cast<std::size_t>(r));
        }
        return f;
    }

}  // namespace

std::vector<ModuleMap> hom_basis(const GradedModule& M, const GradedModule& N, int t)
{
    if (!(M.alg->profile == N.alg->profile))
        throw ValidationError("hom: operands live over different algebras");
    HomLayout L(M, N, t);
    if (L.total == 0)
        return {};
    const auto& A = *M.alg;

    F2Matrix sys;
    std::vector<int> gens = A.generator_indices();
    for (int g : gens) {
        int dg = A.degree[static_cast<std::size_t>(g)];
        for (int d = M.lo; d <= M.hi(); ++d) {
            if (M.dim_at(d) == 0)
                continue;
            int nd2 = N.dim_at(d + dg + t);
            if (nd2 == 0)
                continue;
            for (int c = 0; c < M.dim_at(d); ++c) {
                std::vector<F2Vec> rows(static_cast<std::size_t>(nd2),
                                        F2Vec(static_cast<std::size_t>(std::max(L.total, 1))));
                /* f_{d+dg}(rho(g) e_c) */
                if (L.has_block(d + dg)) {
                    const F2Vec& img = M.column(g, d, c);
                    for (std::size_t x : img.set_bits())
                        for (int r = 0; r < nd2; ++r)
                            rows[static_cast<std::size_t>(r)].flip(
                                static_cast<std::size_t>(L.index(d + dg, static_cast<int>(x), r)));
                }
                /* rho_N(g) f_d(e_c) */
                if (L.has_block(d)) {
                    for (int r = 0; r < N.dim_at(d + t); ++r) {
                        const F2Vec& ncol = N.column(g, d + t, r);
                        for (std::size_t r2 : ncol.set_bits())
                            rows[r2].flip(static_cast<std::size_t>(L.index(d, c, r)));
                    }
                }
                for (auto& row : rows)
                    if (row.any())
                        sys.append_row(row);
            }
        }
    }

    std::vector<ModuleMap> out;
    if (sys.rows() == 0) {
        /* no constraints: every linear choice commutes */
        for (int u = 0; u < L.total; ++u) {
            F2Vec flat(static_cast<std::size_t>(L.total));
            flat.set(static_cast<std::size_t>(u));
            out.push_back(map_from_flat(L, flat));
        }
        return out;
    }
    for (const F2Vec& k : kernel_basis(sys))
        out.push_back(map_from_flat(L, k));
    return out;
}

std::pair<GradedModule, ModuleMap> free_cover(const GradedModule& N)
{
    auto gens = minimal_generators(N);
    std::vector<int> degs;
    for (auto& [d, v] : gens)
        degs.push_back(d);
    GradedModule F = free_module(N.alg, degs);
    ModuleMap pi;
    pi.t = 0;
    pi.src_lo = F.lo;
    pi.cols.resize(F.dims.size());
    const auto& A = *N.alg;
    for (std::size_t di = 0; di < F.dims.size(); ++di) {
        int d = F.lo + static_cast<int>(di);
        pi.cols[di].assign(static_cast<std::size_t>(F.dim_at(d)), F2Vec(static_cast<std::size_t>(N.dim_at(d))));
        int src = 0;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            int ad = d - gens[j].first;
            if (A.dim_at(ad) == 0)
                continue;
            int afirst = A.degree_first[static_cast<std::size_t>(ad)];
            for (int ai = 0; ai < A.dim_at(ad); ++ai, ++src)
                pi.cols[di][static_cast<std::size_t>(src)] = N.apply(afirst + ai, gens[j].first, gens[j].second);
        }
    }
    return {std::move(F), std::move(pi)};
}

int stable_hom_dim(const GradedModule& M, const GradedModule& N, int t)
{
    auto homs = hom_basis(M, N, t);
    if (homs.empty())
        return 0;
    HomLayout L(M, N, t);
    auto [F, pi] = free_cover(N);
    auto lifts = hom_basis(M, F, t);

    RowSpace projected(static_cast<std::size_t>(L.total));
    for (const auto& g : lifts) {
        F2Vec flat(static_cast<std::size_t>(L.total));
        for (int d = M.lo; d <= M.hi(); ++d) {
            if (!L.has_block(d))
                continue;
            for (int c = 0; c < M.dim_at(d); ++c) {
                F2Vec ec(static_cast<std::size_t>(M.dim_at(d)));
                ec.set(static_cast<std::size_t>(c));
                F2Vec img = pi.apply(d + t, g.apply(d, ec));
                for (std::size_t r : img.set_bits())
                    flat.set(static_cast<std::size_t>(L.index(d, c, static_cast<int>(r))));
            }
        }
        projected.insert(flat);
    }
    return static_cast<int>(homs.size() - projected.dim());
}

}  // namespace stmod
