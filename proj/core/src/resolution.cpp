#include "stmod/resolution.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace stmod {

int Resolution::slice_dim(int s, int t) const
{
    int n = 0;
    for (int gd : levels[static_cast<std::size_t>(s)].gen_deg)
        n += alg->dim_at(t - gd);
    return n;
}

int Resolution::slice_offset(int s, int t, int g) const
{
    int n = 0;
    for (int i = 0; i < g; ++i)
        n += alg->dim_at(t - levels[static_cast<std::size_t>(s)].gen_deg[static_cast<std::size_t>(i)]);
    return n;
}

int Resolution::slice_coord(int s, int g, int b) const
{
    int gd = levels[static_cast<std::size_t>(s)].gen_deg[static_cast<std::size_t>(g)];
    int bd = alg->degree[static_cast<std::size_t>(b)];
    int t = gd + bd;
    return slice_offset(s, t, g) + b - alg->degree_first[static_cast<std::size_t>(bd)];
}

F2Vec Resolution::act(int s, int b, int t, const F2Vec& v) const
{
    const auto& A = *alg;
    int db = A.degree[static_cast<std::size_t>(b)];
    F2Vec out(static_cast<std::size_t>(slice_dim(s, t + db)));
    const auto& lvl = levels[static_cast<std::size_t>(s)];
    int off = 0;
    for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
        int ad = t - lvl.gen_deg[g];
        int blk = A.dim_at(ad);
        if (blk == 0)
            continue;
        int afirst = A.degree_first[static_cast<std::size_t>(ad)];
        int tgt_off = slice_offset(s, t + db, static_cast<int>(g));
        int tgt_first = A.degree_first[static_cast<std::size_t>(ad + db)];
        for (int ai = 0; ai < blk; ++ai) {
            if (!v.get(static_cast<std::size_t>(off + ai)))
                continue;
            const F2Vec& prod = A.mul_basis(b, afirst + ai);
            for (std::size_t kbit : prod.set_bits())
                out.flip(static_cast<std::size_t>(tgt_off + static_cast<int>(kbit) - tgt_first));
        }
        off += blk;
    }
    return out;
}

int Resolution::gens_at(int s, int t) const
{
    if (s < 0 || s > s_max())
        return 0;
    int n = 0;
    for (int gd : levels[static_cast<std::size_t>(s)].gen_deg)
        if (gd == t)
            ++n;
    return n;
}

namespace {

    /* differential matrix at (s, t): columns over the slice of P^s, rows over
       the slice of P^{s-1} (or the target for s = 0) */
    F2Matrix build_dmat(const Resolution& res, int s, int t)
    {
        const auto& A = *res.alg;
        const auto& lvl = res.levels[static_cast<std::size_t>(s)];
        int cols = res.slice_dim(s, t);
        int rows = s == 0 ? res.target.dim_at(t) : res.slice_dim(s - 1, t);
        F2Matrix D(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
        int off = 0;
        for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
            int ad = t - lvl.gen_deg[g];
            int blk = A.dim_at(ad);
            if (blk == 0)
                continue;
            int afirst = A.degree_first[static_cast<std::size_t>(ad)];
            for (int ai = 0; ai < blk; ++ai) {
                F2Vec img = s == 0 ? res.target.apply(afirst + ai, lvl.gen_deg[g], lvl.d_gen[g])
                                   : res.act(s - 1, afirst + ai, lvl.gen_deg[g], lvl.d_gen[g]);
                for (std::size_t r : img.set_bits())
                    D.set(r, static_cast<std::size_t>(off + ai));
            }
            off += blk;
        }
        return D;
    }

}  // namespace

Resolution minimal_resolution(const GradedModule& M, int s_max, int t_max)
{
    if (s_max < 0 || t_max < 0)
        throw ValidationError("resolution window bounds must be nonnegative");
    Resolution res;
    res.alg = M.alg;
    res.target = M;
    res.target.trim();
    res.t_max = t_max;
    res.levels.resize(static_cast<std::size_t>(s_max) + 1);
    res.dmat.resize(static_cast<std::size_t>(s_max) + 1);

    const auto& A = *res.alg;
    std::vector<int> agens = A.generator_indices();

    /* level 0: minimal free cover of the target */
    for (auto& [d, v] : minimal_generators(res.target)) {
        if (d > t_max)
            continue;
        res.levels[0].gen_deg.push_back(d);
        res.levels[0].d_gen.push_back(v);
    }

    for (int s = 0; s <= s_max; ++s) {
        /* kernels of d_s degree by degree, then the next level's generators */
        std::map<int, std::vector<F2Vec>> kernels;
        int tlo = res.levels[static_cast<std::size_t>(s)].gen_deg.empty()
                      ? t_max + 1
                      : res.levels[static_cast<std::size_t>(s)].gen_deg.front();
        for (int t = tlo; t <= t_max; ++t) {
            F2Matrix D = build_dmat(res, s, t);
            if (D.cols() == 0)
                continue;
            kernels[t] = kernel_basis(D);
            res.dmat[static_cast<std::size_t>(s)].emplace(t, std::move(D));
        }
        if (s == s_max)
            break;

        auto& next = res.levels[static_cast<std::size_t>(s + 1)];
        for (int t = tlo; t <= t_max; ++t) {
            auto kit = kernels.find(t);
            if (kit == kernels.end() || kit->second.empty())
                continue;
            RowSpace span(static_cast<std::size_t>(res.slice_dim(s, t)));
            /* A+ K_t = sum of generator images of lower kernels */
            for (int g : agens) {
                int dg = A.degree[static_cast<std::size_t>(g)];
                auto lower = kernels.find(t - dg);
                if (lower == kernels.end())
                    continue;
                for (const F2Vec& kv : lower->second)
                    span.insert(res.act(s, g, t - dg, kv));
            }
            for (const F2Vec& kv : kit->second)
                if (span.insert(kv)) {
                    next.gen_deg.push_back(t);
                    next.d_gen.push_back(kv);
                }
        }
    }
    return res;
}

Resolution minimal_resolution_full(const GradedModule& M, int s_levels)
{
    GradedModule T = M;
    T.trim();
    if (T.is_zero())
        return minimal_resolution(T, s_levels, 0);
    /* each level's generators live at most topDegree above the previous
       level's, so this window keeps every kernel complete */
    int t_max = T.hi() + (s_levels + 1) * M.alg->top_degree;
    return minimal_resolution(T, s_levels, t_max);
}

GradedModule kernel_module(const Resolution& res, int s)
{
    if (s < 1 || s > res.s_max() + 1)
        throw ValidationError("kernel_module: level out of range");
    int lvl = s - 1;
    const auto& A = *res.alg;

    /* kernel bases per degree, from the cached differentials */
    std::map<int, std::vector<F2Vec>> kern;
    std::map<int, std::vector<std::size_t>> free_cols;
    int lo = 0, hi = -1;
    for (const auto& [t, D] : res.dmat[static_cast<std::size_t>(lvl)]) {
        RrefResult r = rref(D);
        std::vector<bool> is_pivot(D.cols(), false);
        for (std::size_t p : r.pivots)
            is_pivot[p] = true;
        std::vector<F2Vec> basis;
        std::vector<std::size_t> frees;
        for (std::size_t c = 0; c < D.cols(); ++c) {
            if (is_pivot[c])
                continue;
            F2Vec v(D.cols());
            v.set(c);
            for (std::size_t i = 0; i < r.rank; ++i)
                if (r.reduced.get(i, c))
                    v.set(r.pivots[i]);
            basis.push_back(std::move(v));
            frees.push_back(c);
        }
        if (!basis.empty()) {
            if (hi < lo)
                lo = hi = t;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        kern[t] = std::move(basis);
        free_cols[t] = std::move(frees);
    }

    GradedModule K;
    K.alg = res.alg;
    if (hi < lo) {
        init_action_shape(K);
        return K;
    }
    K.lo = lo;
    K.dims.assign(static_cast<std::size_t>(hi - lo) + 1, 0);
    for (auto& [t, basis] : kern)
        if (t >= lo && t <= hi)
            K.dims[static_cast<std::size_t>(t - lo)] = static_cast<int>(basis.size());
    init_action_shape(K);

    for (int b = 1; b < A.dim; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        for (int t = lo; t <= hi; ++t) {
            if (K.dim_at(t) == 0 || K.dim_at(t + db) == 0)
                continue;
            const auto& tgt_free = free_cols[t + db];
            auto& cols = K.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(t - lo)];
            for (int c = 0; c < K.dim_at(t); ++c) {
                F2Vec img = res.act(lvl, b, t, kern[t][static_cast<std::size_t>(c)]);
                /* kernel bases carry identity at their free columns, so
                   coefficients are read off directly */
                for (std::size_t j = 0; j < tgt_free.size(); ++j)
                    if (img.get(tgt_free[j]))
                        cols[static_cast<std::size_t>(c)].set(j);
            }
        }
    }
    return K;
}

ExtChart ext_chart(const GradedModule& M, int s_max, int t_max)
{
    ExtChart chart;
    auto res = std::make_shared<Resolution>(minimal_resolution(M, s_max, t_max));
    chart.res = res;
    chart.s_max = s_max;
    chart.t_max = t_max;
    chart.unit_target = is_unit_like(res->target) && res->target.lo == 0;
    for (int s = 0; s <= s_max; ++s)
        for (int gd : res->levels[static_cast<std::size_t>(s)].gen_deg)
            chart.dims[{s, gd}]++;

    if (chart.unit_target) {
        const auto& p = M.alg->profile;
        for (std::size_t i = 0; i < p.bounds.size(); ++i)
            for (int j = 0; j < p.bounds[i]; ++j) {
                int t = (1 << j) * ((1 << (i + 1)) - 1);
                if (t <= t_max && 1 <= s_max && chart.dim_at(1, t) == 1) {
                    ExtClass c;
                    c.s = 1;
                    c.t = t;
                    c.coeffs = F2Vec(1);
                    c.coeffs.set(0);
                    chart.named[fmt::format("h{}{}", i + 1, j)] = c;
                }
            }
    }
    return chart;
}

ExtChart ext_chart_unit(std::shared_ptr<const HopfAlgebra> alg, int s_max, int t_max)
{
    return ext_chart(unit_module(std::move(alg)), s_max, t_max);
}

ExtClass ext_class_at(const ExtChart& chart, int s, int t)
{
    int n = chart.dim_at(s, t);
    if (n != 1)
        throw ValidationError(fmt::format("Ext^({},{}) is {}-dimensional, not 1; cannot pick a class", s, t, n));
    ExtClass c;
    c.s = s;
    c.t = t;
    c.coeffs = F2Vec(1);
    c.coeffs.set(0);
    return c;
}

ExtClass named_class(const ExtChart& chart, const std::string& name)
{
    auto it = chart.named.find(name);
    if (it == chart.named.end())
        throw ValidationError(fmt::format("chart has no named class '{}'", name));
    return it->second;
}

namespace {

    /* positions of the level-s generators of degree t inside the slice (s,t) */
    std::vector<int> gen_positions(const Resolution& res, int s, int t)
    {
        std::vector<int> out;
        const auto& lvl = res.levels[static_cast<std::size_t>(s)];
        for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g)
            if (lvl.gen_deg[g] == t)
                out.push_back(res.slice_coord(s, static_cast<int>(g), 0));
        return out;
    }

}  // namespace

ChainLift lift_class(const Resolution& res, const ExtClass& y, int depth)
{
    ChainLift L;
    L.cls = y;
    L.depth = depth;
    L.lift.resize(static_cast<std::size_t>(depth) + 1);

    /* indices of the degree-t_y generators at level s_y, to read y's coefficients */
    const auto& ylvl = res.levels[static_cast<std::size_t>(y.s)];
    std::map<std::size_t, std::size_t> ygen_pos;  // generator -> coefficient index
    {
        std::size_t ci = 0;
        for (std::size_t g = 0; g < ylvl.gen_deg.size(); ++g)
            if (ylvl.gen_deg[g] == y.t)
                ygen_pos[g] = ci++;
    }

    for (int k = 0; k <= depth; ++k) {
        int s = y.s + k;
        if (s > res.s_max())
            throw WindowError("chain lift exceeds the resolution window");
        const auto& lvl = res.levels[static_cast<std::size_t>(s)];
        auto& maps = L.lift[static_cast<std::size_t>(k)];
        maps.resize(lvl.gen_deg.size());
        std::map<int, F2Solver> solvers;
        for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
            int u = lvl.gen_deg[g];
            int tt = u - y.t;
            if (tt < 0) {
                maps[g] = F2Vec(0);
                continue;
            }
            if (k == 0) {
                F2Vec v(static_cast<std::size_t>(res.slice_dim(0, tt)));
                if (tt == 0) {
                    auto it = ygen_pos.find(g);
                    if (it != ygen_pos.end() && y.coeffs.get(it->second))
                        v.set(static_cast<std::size_t>(res.slice_coord(0, 0, 0)));
                }
                maps[g] = std::move(v);
                continue;
            }
            /* rhs = Y_{k-1}(d g) */
            F2Vec rhs(static_cast<std::size_t>(res.slice_dim(k - 1, tt)));
            const auto& prev_lvl = res.levels[static_cast<std::size_t>(s - 1)];
            const F2Vec& dg = lvl.d_gen[g];
            int off = 0;
            for (std::size_t g2 = 0; g2 < prev_lvl.gen_deg.size(); ++g2) {
                int ad = u - prev_lvl.gen_deg[g2];
                int blk = res.alg->dim_at(ad);
                if (blk == 0)
                    continue;
                int afirst = res.alg->degree_first[static_cast<std::size_t>(ad)];
                const F2Vec& prev_map = L.lift[static_cast<std::size_t>(k - 1)][g2];
                for (int ai = 0; ai < blk; ++ai) {
                    if (!dg.get(static_cast<std::size_t>(off + ai)))
                        continue;
                    if (prev_map.size() == 0)
                        continue;
                    rhs ^= res.act(k - 1, afirst + ai, prev_lvl.gen_deg[g2] - y.t, prev_map);
                }
                off += blk;
            }
            auto sit = solvers.find(tt);
            if (sit == solvers.end()) {
                auto dit = res.dmat[static_cast<std::size_t>(k)].find(tt);
                if (dit == res.dmat[static_cast<std::size_t>(k)].end()) {
                    /* below the first generator of this level the slice is empty */
                    if (res.slice_dim(k, tt) == 0) {
                        if (rhs.any())
                            throw Error("internal: chain lift hit a nonzero cycle in an empty slice");
                        maps[g] = F2Vec(0);
                        continue;
                    }
                    throw WindowError("chain lift needs a differential outside the window");
                }
                sit = solvers.emplace(tt, F2Solver(dit->second)).first;
            }
            auto sol = sit->second.solve(rhs);
            if (!sol)
                throw Error("internal: chain lift has no solution (exactness violated)");
            maps[g] = std::move(*sol);
        }
    }
    return L;
}

ExtClass yoneda_product(const ExtChart& chart, const ExtClass& x, const ExtClass& y)
{
    if (!chart.unit_target)
        throw ValidationError("products are defined on the chart of the unit module");
    const Resolution& res = *chart.res;
    int s = x.s + y.s, t = x.t + y.t;
    if (s > chart.s_max || t > chart.t_max)
        throw WindowError(fmt::format("window too small to lift the product into Ext^({},{})", s, t));

    ExtClass z;
    z.s = s;
    z.t = t;
    z.coeffs = F2Vec(static_cast<std::size_t>(chart.dim_at(s, t)));
    if (x.zero() || y.zero())
        return z;

    ChainLift L = lift_class(res, y, x.s);

    /* positions of (gen', unit) coordinates at level x.s, degree x.t */
    std::vector<int> xpos = gen_positions(res, x.s, x.t);

    const auto& lvl = res.levels[static_cast<std::size_t>(s)];
    std::size_t ci = 0;
    for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
        if (lvl.gen_deg[g] != t)
            continue;
        const F2Vec& img = L.lift[static_cast<std::size_t>(x.s)][g];
        bool bit = false;
        for (std::size_t xi = 0; xi < xpos.size(); ++xi)
            if (x.coeffs.get(xi) && img.size() && img.get(static_cast<std::size_t>(xpos[xi])))
                bit = !bit;
        if (bit)
            z.coeffs.set(ci);
        ++ci;
    }
    return z;
}

std::optional<int> nilpotency_order(const ExtChart& chart, const ExtClass& x, int cap)
{
    if (cap < 1)
        throw ValidationError("nilpotency cap must be at least 1");
    if (x.zero())
        return 1;
    ExtClass p = x;
    for (int q = 2; q <= cap; ++q) {
        p = yoneda_product(chart, x, p);
        if (p.zero())
            return q;
    }
    return std::nullopt;
}

void verify_resolution(const Resolution& res)
{
    /* minimality: differentials land in A+ P (no unit coefficients) */
    for (int s = 1; s <= res.s_max(); ++s) {
        const auto& lvl = res.levels[static_cast<std::size_t>(s)];
        const auto& prev = res.levels[static_cast<std::size_t>(s - 1)];
        for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
            for (std::size_t g2 = 0; g2 < prev.gen_deg.size(); ++g2) {
                if (prev.gen_deg[g2] != lvl.gen_deg[g])
                    continue;
                int pos = res.slice_coord(s - 1, static_cast<int>(g2), 0);
                if (lvl.d_gen[g].get(static_cast<std::size_t>(pos)))
                    throw Error("resolution is not minimal: unit coefficient in a differential");
            }
        }
    }
    /* exactness on the window: rank d_{s+1} at t = dim ker d_s at t */
    for (int s = 0; s < res.s_max(); ++s) {
        for (const auto& [t, D] : res.dmat[static_cast<std::size_t>(s)]) {
            std::size_t kdim = D.cols() - rank(D);
            auto nit = res.dmat[static_cast<std::size_t>(s + 1)].find(t);
            std::size_t irank = nit == res.dmat[static_cast<std::size_t>(s + 1)].end() ? 0 : rank(nit->second);
            if (kdim != irank)
                throw Error(fmt::format("resolution not exact at level {}, degree {}: ker {} vs im {}", s, t,
                                        kdim, irank));
        }
    }
    /* d o d = 0 */
    for (int s = 1; s <= res.s_max(); ++s) {
        const auto& lvl = res.levels[static_cast<std::size_t>(s)];
        for (std::size_t g = 0; g < lvl.gen_deg.size(); ++g) {
            int t = lvl.gen_deg[g];
            auto dit = res.dmat[static_cast<std::size_t>(s - 1)].find(t);
            if (dit == res.dmat[static_cast<std::size_t>(s - 1)].end())
                continue;
            if (dit->second.mul_vec(lvl.d_gen[g]).any())
                throw Error("resolution differential does not square to zero");
        }
    }
}

}  // namespace stmod
