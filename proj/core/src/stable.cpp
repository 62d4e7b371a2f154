#include "stmod/stable.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <random>

namespace stmod {

ReductionResult reduce(const GradedModule& M)
{
    const auto& A = *M.alg;
    int omega = A.top();
    int top = A.top_degree;

    ReductionResult out;

    /* split generators: columns whose omega-images are independent */
    std::vector<std::pair<int, int>> picks;  // (degree, column)
    for (int d = M.lo; d <= M.hi(); ++d) {
        if (M.dim_at(d) == 0 || M.dim_at(d + top) == 0)
            continue;
        RowSpace span(static_cast<std::size_t>(M.dim_at(d + top)));
        for (int c = 0; c < M.dim_at(d); ++c)
            if (span.insert(M.column(omega, d, c)))
                picks.emplace_back(d, c);
    }
    out.free_rank = static_cast<int>(picks.size());

    std::vector<int> gen_degs;
    for (auto& [d, c] : picks) {
        gen_degs.push_back(d);
        F2Vec v(static_cast<std::size_t>(M.dim_at(d)));
        v.set(static_cast<std::size_t>(c));
        out.free_gens.emplace_back(d, std::move(v));
    }
    out.free_model = free_module(M.alg, gen_degs);

    if (picks.empty()) {
        out.reduced = M;
        out.reduced.trim();
        out.retraction.t = 0;
        out.retraction.src_lo = M.lo;
        out.retraction.cols.resize(M.dims.size());
        for (std::size_t di = 0; di < M.dims.size(); ++di)
            out.retraction.cols[di].assign(static_cast<std::size_t>(M.dims[di]), F2Vec(0));
        out.inclusion.t = 0;
        out.inclusion.src_lo = out.reduced.lo;
        out.inclusion.cols.resize(out.reduced.dims.size());
        for (std::size_t di = 0; di < out.reduced.dims.size(); ++di) {
            int d = out.reduced.lo + static_cast<int>(di);
            out.inclusion.cols[di].resize(static_cast<std::size_t>(out.reduced.dim_at(d)));
            for (int c = 0; c < out.reduced.dim_at(d); ++c) {
                F2Vec e(static_cast<std::size_t>(M.dim_at(d)));
                e.set(static_cast<std::size_t>(c));
                out.inclusion.cols[di][static_cast<std::size_t>(c)] = std::move(e);
            }
        }
        return out;
    }

    /* functionals f_j: M_{deg(g_j)+top} -> F2 with f_j(e_i m_l) = [l=j][e_i=omega],
       extended by zero; grouped per module degree */
    std::map<int, std::vector<std::pair<std::size_t, F2Vec>>> funcs;  // degree -> (gen j, functional)
    {
        std::map<int, std::vector<std::size_t>> by_degree;
        for (std::size_t j = 0; j < picks.size(); ++j)
            by_degree[picks[j].first + top].push_back(j);
        for (auto& [D, gens_here] : by_degree) {
            std::size_t width = static_cast<std::size_t>(M.dim_at(D));
            std::vector<F2Vec> basis;
            std::vector<std::size_t> pivots;
            std::vector<F2Vec> vals;  // value vector over gens_here per stored row
            for (std::size_t l = 0; l < picks.size(); ++l) {
                int ad = D - picks[l].first;
                if (ad < 0 || ad > top)
                    continue;
                for (int b = A.degree_first[static_cast<std::size_t>(ad)];
                     b < A.degree_first[static_cast<std::size_t>(ad) + 1]; ++b) {
                    F2Vec v = M.column(b, picks[l].first, picks[l].second);
                    F2Vec val(gens_here.size());
                    if (b == omega)
                        for (std::size_t gi = 0; gi < gens_here.size(); ++gi)
                            if (gens_here[gi] == l)
                                val.set(gi);
                    for (std::size_t i = 0; i < basis.size(); ++i)
                        if (v.get(pivots[i])) {
                            v ^= basis[i];
                            val ^= vals[i];
                        }
                    long p = v.first_set();
                    if (p < 0) {
                        if (val.any())
                            throw Error("internal: split generators are not independent");
                        continue;
                    }
                    std::size_t pc = static_cast<std::size_t>(p);
                    for (std::size_t i = 0; i < basis.size(); ++i)
                        if (basis[i].get(pc)) {
                            basis[i] ^= v;
                            vals[i] ^= val;
                        }
                    basis.push_back(std::move(v));
                    pivots.push_back(pc);
                    vals.push_back(std::move(val));
                }
            }
            for (std::size_t gi = 0; gi < gens_here.size(); ++gi) {
                F2Vec phi(width);
                for (std::size_t i = 0; i < basis.size(); ++i)
                    if (vals[i].get(gi))
                        phi.set(pivots[i]);
                funcs[D].emplace_back(gens_here[gi], std::move(phi));
            }
        }
    }

    /* retraction r(x) = sum_j sum_i b_i f_j(e_i x) g_j, degreewise columns */
    out.retraction.t = 0;
    out.retraction.src_lo = M.lo;
    out.retraction.cols.resize(M.dims.size());
    for (std::size_t di = 0; di < M.dims.size(); ++di) {
        int d = M.lo + static_cast<int>(di);
        int fd = out.free_model.dim_at(d);
        out.retraction.cols[di].assign(static_cast<std::size_t>(M.dims[di]),
                                       F2Vec(static_cast<std::size_t>(fd)));
        if (fd == 0 || M.dims[di] == 0)
            continue;
        std::vector<int> off(picks.size() + 1, 0);
        for (std::size_t j = 0; j < picks.size(); ++j)
            off[j + 1] = off[j] + A.dim_at(d - gen_degs[j]);
        for (int c = 0; c < M.dims[di]; ++c) {
            auto& col = out.retraction.cols[di][static_cast<std::size_t>(c)];
            for (auto& [D, fs] : funcs) {
                int need = D - d;  // degree of e_i
                if (need < 0 || need > top || M.dim_at(D) == 0)
                    continue;
                for (int b = A.degree_first[static_cast<std::size_t>(need)];
                     b < A.degree_first[static_cast<std::size_t>(need) + 1]; ++b) {
                    const F2Vec& u = M.column(b, d, c);
                    for (auto& [j, phi] : fs) {
                        if (!phi.dot(u))
                            continue;
                        /* add the dual family element of e_b into generator j's block */
                        for (std::size_t kbit : A.socle_dual[static_cast<std::size_t>(b)].set_bits()) {
                            int kdeg = A.degree[kbit];
                            if (kdeg != d - gen_degs[j])
                                continue;
                            int inner = static_cast<int>(kbit) - A.degree_first[static_cast<std::size_t>(kdeg)];
                            col.flip(static_cast<std::size_t>(off[j] + inner));
                        }
                    }
                }
            }
        }
    }

    /* reduced = ker(retraction), with the inherited action */
    std::map<int, std::vector<F2Vec>> kern;
    std::map<int, std::vector<std::size_t>> free_cols;
    int rlo = 0, rhi = -1;
    for (std::size_t di = 0; di < M.dims.size(); ++di) {
        int d = M.lo + static_cast<int>(di);
        if (M.dims[di] == 0)
            continue;
        F2Matrix Rm(static_cast<std::size_t>(out.free_model.dim_at(d)), static_cast<std::size_t>(M.dims[di]));
        for (int c = 0; c < M.dims[di]; ++c)
            for (std::size_t r : out.retraction.cols[di][static_cast<std::size_t>(c)].set_bits())
                Rm.set(r, static_cast<std::size_t>(c));
        RrefResult rr = rref(Rm);
        std::vector<bool> is_pivot(Rm.cols(), false);
        for (std::size_t p : rr.pivots)
            is_pivot[p] = true;
        std::vector<F2Vec> basis;
        std::vector<std::size_t> frees;
        for (std::size_t c = 0; c < Rm.cols(); ++c) {
            if (is_pivot[c])
                continue;
            F2Vec v(Rm.cols());
            v.set(c);
            for (std::size_t i = 0; i < rr.rank; ++i)
                if (rr.reduced.get(i, c))
                    v.set(rr.pivots[i]);
            basis.push_back(std::move(v));
            frees.push_back(c);
        }
        if (!basis.empty()) {
            if (rhi < rlo)
                rlo = rhi = d;
            rlo = std::min(rlo, d);
            rhi = std::max(rhi, d);
        }
        kern[d] = std::move(basis);
        free_cols[d] = std::move(frees);
    }

    GradedModule R;
    R.alg = M.alg;
    if (rhi >= rlo) {
        R.lo = rlo;
        R.dims.assign(static_cast<std::size_t>(rhi - rlo) + 1, 0);
        for (auto& [d, basis] : kern)
            if (d >= rlo && d <= rhi)
                R.dims[static_cast<std::size_t>(d - rlo)] = static_cast<int>(basis.size());
    }
    init_action_shape(R);
    for (int b = 1; b < A.dim && rhi >= rlo; ++b) {
        int db = A.degree[static_cast<std::size_t>(b)];
        for (int d = rlo; d <= rhi; ++d) {
            if (R.dim_at(d) == 0 || R.dim_at(d + db) == 0)
                continue;
            const auto& tgt_free = free_cols[d + db];
            auto& cols = R.action[static_cast<std::size_t>(b)][static_cast<std::size_t>(d - rlo)];
            for (int c = 0; c < R.dim_at(d); ++c) {
                F2Vec img = M.apply(b, d, kern[d][static_cast<std::size_t>(c)]);
                for (std::size_t j = 0; j < tgt_free.size(); ++j)
                    if (img.get(tgt_free[j]))
                        cols[static_cast<std::size_t>(c)].set(j);
            }
        }
    }

    out.inclusion.t = 0;
    out.inclusion.src_lo = R.lo;
    out.inclusion.cols.resize(R.dims.size());
    for (std::size_t di = 0; di < R.dims.size(); ++di) {
        int d = R.lo + static_cast<int>(di);
        out.inclusion.cols[di].resize(static_cast<std::size_t>(R.dim_at(d)));
        for (int c = 0; c < R.dim_at(d); ++c)
            out.inclusion.cols[di][static_cast<std::size_t>(c)] = kern[d][static_cast<std::size_t>(c)];
    }

    out.reduced = std::move(R);
    out.reduced.trim();

    /* reducedness certificate and the dimension identity */
    for (int d = out.reduced.lo; d <= out.reduced.hi(); ++d)
        for (int c = 0; c < out.reduced.dim_at(d); ++c) {
            F2Vec e(static_cast<std::size_t>(out.reduced.dim_at(d)));
            e.set(static_cast<std::size_t>(c));
            if (out.reduced.apply(omega, d, e).any())
                throw Error("internal: reduction left a free summand");
        }
    if (M.total_dim() != out.reduced.total_dim() + out.free_rank * A.dim)
        throw Error("internal: reduction dimension identity failed");
    return out;
}

MargolisTable margolis_homology(const GradedModule& M, const F2Vec& x)
{
    const auto& A = *M.alg;
    if (x.none())
        throw ValidationError("margolis: element is zero");
    if (A.multiply(x, x).any())
        throw ValidationError("margolis: element does not square to zero");
    int dx = A.element_degree(x);

    MargolisTable out;
    out.op_degree = dx;
    std::map<int, int> ranks;
    for (int d = M.lo - dx; d <= M.hi(); ++d) {
        if (M.dim_at(d) == 0 || M.dim_at(d + dx) == 0) {
            ranks[d] = 0;
            continue;
        }
        F2Matrix X(static_cast<std::size_t>(M.dim_at(d + dx)), static_cast<std::size_t>(M.dim_at(d)));
        for (int c = 0; c < M.dim_at(d); ++c) {
            F2Vec e(static_cast<std::size_t>(M.dim_at(d)));
            e.set(static_cast<std::size_t>(c));
            F2Vec img = M.apply_elem(x, d, e);
            for (std::size_t r : img.set_bits())
                X.set(r, static_cast<std::size_t>(c));
        }
        ranks[d] = static_cast<int>(rank(X));
    }
    for (int d = M.lo; d <= M.hi(); ++d) {
        int h = M.dim_at(d) - ranks[d] - ranks[d - dx];
        if (h < 0)
            throw Error("internal: negative Margolis dimension");
        if (h > 0)
            out.dims[d] = h;
    }
    return out;
}

MargolisTable margolis_homology(const GradedModule& M, const std::string& op_name)
{
    return margolis_homology(M, named_element(*M.alg, op_name).element);
}

std::vector<NamedElement> square_zero_generators(const HopfAlgebra& alg)
{
    std::vector<NamedElement> out;
    for (const char* name : {"Q0", "Q1", "Q2", "P21"}) {
        if (!has_named_element(alg, name))
            continue;
        NamedElement el = named_element(alg, name);
        if (alg.multiply(el.element, el.element).none())
            out.push_back(std::move(el));
    }
    return out;
}

std::vector<NamedElement> primitive_square_zero_generators(const HopfAlgebra& alg)
{
    std::vector<NamedElement> out;
    for (auto& el : square_zero_generators(alg)) {
        int i = el.basis_index;
        const auto& pairs = alg.cop[static_cast<std::size_t>(i)];
        std::vector<std::pair<int, int>> prim = {{0, i}, {i, 0}};
        if (pairs == prim)
            out.push_back(el);
    }
    return out;
}

namespace {

    bool margolis_tables_match(const GradedModule& A, const GradedModule& B)
    {
        for (auto& el : primitive_square_zero_generators(*A.alg))
            if (!(margolis_homology(A, el.element) == margolis_homology(B, el.element)))
                return false;
        return true;
    }

    GradedModule reduced_of(const GradedModule& M)
    {
        return reduce(M).reduced;
    }

}  // namespace

Tri stable_iso(const GradedModule& M, const GradedModule& N, const StableIsoOptions& opts)
{
    if (!(M.alg->profile == N.alg->profile))
        throw ValidationError("stable_iso: operands live over different algebras");
    GradedModule rm = reduced_of(M), rn = reduced_of(N);
    if (rm.is_zero() && rn.is_zero())
        return Tri::Yes;
    if (rm.lo != rn.lo || rm.dims != rn.dims)
        return Tri::No;
    if (!margolis_tables_match(rm, rn))
        return Tri::No;

    /* exact route when one side is invertible */
    for (int attempt = 0; attempt < 2; ++attempt) {
        const GradedModule& inv = attempt == 0 ? rn : rm;
        const GradedModule& other = attempt == 0 ? rm : rn;
        PicardCertificate c = invertible(inv);
        if (c.invertible) {
            GradedModule w = reduced_of(tensor(other, dual(inv)));
            return is_unit_like(w) ? Tri::Yes : Tri::No;
        }
    }

    /* hom-space search between the reduced models */
    auto homs = hom_basis(rm, rn, 0);
    if (homs.empty())
        return Tri::No;
    auto combo_is_iso = [&](std::uint64_t mask) {
        ModuleMap f;
        f.t = 0;
        f.src_lo = homs[0].src_lo;
        f.cols = homs[0].cols;
        for (std::size_t di = 0; di < f.cols.size(); ++di)
            for (std::size_t c = 0; c < f.cols[di].size(); ++c)
                f.cols[di][c] = F2Vec(f.cols[di][c].size());
        for (std::size_t h = 0; h < homs.size(); ++h) {
            if (!(mask & (std::uint64_t(1) << h)))
                continue;
            for (std::size_t di = 0; di < f.cols.size(); ++di)
                for (std::size_t c = 0; c < f.cols[di].size(); ++c)
                    f.cols[di][c] ^= homs[h].cols[di][c];
        }
        return map_is_iso(f, rm, rn);
    };
    if (homs.size() <= static_cast<std::size_t>(opts.enumerate_cap)) {
        std::uint64_t count = std::uint64_t(1) << homs.size();
        for (std::uint64_t mask = 1; mask < count; ++mask)
            if (combo_is_iso(mask))
                return Tri::Yes;
        return Tri::No;
    }
    std::mt19937_64 rng(opts.seed);
    for (int tr = 0; tr < opts.random_tries; ++tr) {
        std::uint64_t mask = rng();
        if (homs.size() < 64)
            mask &= (std::uint64_t(1) << homs.size()) - 1;
        if (mask && combo_is_iso(mask))
            return Tri::Yes;
    }
    return Tri::Inconclusive;
}

void SyzygyFactory::ensure(int n)
{
    if (unit_.alg == nullptr)
        unit_ = unit_module(alg_);
    if (n <= levels_)
        return;
    res_ = std::make_shared<Resolution>(minimal_resolution_full(unit_, n - 1));
    levels_ = n;
    pos_.clear();
    neg_.clear();
}

const GradedModule& SyzygyFactory::positive(int n)
{
    ensure(n);
    auto it = pos_.find(n);
    if (it == pos_.end()) {
        GradedModule K = kernel_module(*res_, n);
        K.trim();
        it = pos_.emplace(n, std::move(K)).first;
    }
    return it->second;
}

GradedModule SyzygyFactory::module(int n, int m)
{
    if (unit_.alg == nullptr)
        unit_ = unit_module(alg_);
    if (n == 0)
        return shift(unit_, m);
    if (n > 0)
        return shift(positive(n), m);
    auto it = neg_.find(-n);
    if (it == neg_.end()) {
        GradedModule D = dual(positive(-n));
        D.trim();
        it = neg_.emplace(-n, std::move(D)).first;
    }
    return shift(it->second, m);
}

MargolisTable SyzygyFactory::table(int n, const std::string& op)
{
    auto key = std::make_pair(n, op);
    auto it = tables_.find(key);
    if (it == tables_.end())
        it = tables_.emplace(key, margolis_homology(module(n, 0), op)).first;
    return it->second;
}

GradedModule syzygy(std::shared_ptr<const HopfAlgebra> alg, int n, int m)
{
    SyzygyFactory f(std::move(alg));
    return f.module(n, m);
}

PicardCertificate invertible(const GradedModule& M)
{
    PicardCertificate cert;
    GradedModule R = reduced_of(M);
    if (R.is_zero())
        return cert;

    for (auto& el : square_zero_generators(*M.alg)) {
        MargolisTable t = margolis_homology(R, el.element);
        PicardCertificate::FilterEntry fe;
        fe.op = el.name;
        fe.total = t.total();
        fe.degree = t.single_degree();
        if (fe.total != 1)
            cert.filter_passed = false;
        cert.margolis_filter.push_back(std::move(fe));
    }
    if (!cert.filter_passed)
        return cert;  // the filter is necessary, so a definitive failure stands

    ReductionResult W = reduce(tensor(R, dual(R)));
    cert.witness_computed = true;
    cert.witness_free_rank = W.free_rank;
    for (int d = W.reduced.lo; d <= W.reduced.hi(); ++d)
        if (W.reduced.dim_at(d) > 0)
            cert.witness_dims[d] = W.reduced.dim_at(d);
    cert.invertible = is_unit_like(W.reduced);
    return cert;
}

PicardCertificate classify_picard(const GradedModule& M, int scan_n, int scan_m)
{
    PicardCertificate cert = invertible(M);
    cert.scan_n = scan_n;
    cert.scan_m = scan_m;
    if (!cert.invertible)
        throw ValidationError("classify: module is not invertible");

    GradedModule R = reduced_of(M);
    SyzygyFactory fact(M.alg);
    auto prims = primitive_square_zero_generators(*M.alg);

    std::vector<int> n_order;
    n_order.push_back(0);
    for (int n = 1; n <= scan_n; ++n) {
        n_order.push_back(n);
        n_order.push_back(-n);
    }

    for (int n : n_order) {
        GradedModule S = fact.module(n, 0);
        S.trim();
        if (S.dims != R.dims)
            continue;
        int m = R.lo - S.lo;
        if (m < -scan_m || m > scan_m)
            continue;
        bool ok = true;
        for (auto& el : prims) {
            MargolisTable ts = fact.table(n, el.name);
            MargolisTable tr = margolis_homology(R, el.element);
            MargolisTable shifted;
            shifted.op_degree = ts.op_degree;
            for (auto& [d, v] : ts.dims)
                shifted.dims[d + m] = v;
            if (!(shifted == tr)) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        GradedModule W = reduced_of(tensor(R, fact.module(-n, -m)));
        if (is_unit_like(W)) {
            cert.classified = true;
            cert.exotic = false;
            cert.n = n;
            cert.m = m;
            return cert;
        }
    }
    cert.classified = true;
    cert.exotic = true;
    return cert;
}

bool relative_picard_member(const GradedModule& M, const Profile& sub)
{
    GradedModule R = reduced_of(M);
    GradedModule res = restrict_to(R, sub);
    return is_unit_like(reduce(res).reduced);
}

}  // namespace stmod
