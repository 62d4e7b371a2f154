#include "stmod/milnor.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <set>

namespace stmod {

Profile Profile::parse(std::string_view text)
{
    Profile p;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            throw ValidationError("empty entry in profile");
        char* end = nullptr;
        long v = std::strtol(cur.c_str(), &end, 10);
        if (end == nullptr || *end != '\0')
            throw ValidationError(fmt::format("bad profile entry '{}'", cur));
        p.bounds.push_back(static_cast<int>(v));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(c)))
            cur.push_back(c);
    }
    flush();
    p.validate();
    return p;
}

std::string Profile::str() const
{
    return fmt::format("{}", fmt::join(bounds, ","));
}

void Profile::validate() const
{
    if (bounds.empty())
        throw ValidationError("profile must have at least one bound");
    int sum = 0;
    for (int h : bounds) {
        if (h < 1)
            throw ValidationError(fmt::format("profile bound {} is not positive (profile ({}))", h, str()));
        sum += h;
    }
    if (sum > 8)
        throw ValidationError(fmt::format("profile ({}) too large: sum of bounds {} exceeds 8", str(), sum));
}

bool Profile::contained_in(const Profile& amb) const
{
    if (bounds.size() > amb.bounds.size())
        return false;
    for (std::size_t i = 0; i < bounds.size(); ++i)
        if (bounds[i] > amb.bounds[i])
            return false;
    return true;
}

int expo_degree(const Expo& e)
{
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        d += e[i] * ((1 << (i + 1)) - 1);
    return d;
}

std::string expo_str(const Expo& e)
{
    std::size_t len = e.size();
    while (len > 1 && e[len - 1] == 0)
        --len;
    std::string out = "Sq(";
    for (std::size_t i = 0; i < len; ++i) {
        if (i)
            out += ',';
        out += std::to_string(e[i]);
    }
    out += ')';
    return out;
}

namespace {

    /* polynomial in the dual's tensor square: set of (expoL, expoR) with F2 coefficients */
    using TensorPoly = std::set<std::pair<Expo, Expo>>;

    void toggle(TensorPoly& p, std::pair<Expo, Expo> term)
    {
        auto it = p.find(term);
        if (it == p.end())
            p.insert(std::move(term));
        else
            p.erase(it);
    }

    bool within_bounds(const Expo& e, const Profile& p)
    {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] >= (1 << p.bounds[i]))
                return false;
        return true;
    }

    /* D(xi_i^{2^b}) in the quotient: sum over j of xi_{i-j}^{2^{b+j}} (x) xi_j^{2^b},
       dropping terms whose factor overflows its relation bound. */
    TensorPoly diagonal_of_power(const Profile& p, int i, int b)
    {
        std::size_t k = p.bounds.size();
        TensorPoly out;
        for (int j = 0; j <= i; ++j) {
            Expo left(k, 0), right(k, 0);
            if (j < i)
                left[static_cast<std::size_t>(i - j - 1)] = 1 << (b + j);
            if (j > 0)
                right[static_cast<std::size_t>(j - 1)] = 1 << b;
            if (within_bounds(left, p) && within_bounds(right, p))
                toggle(out, {std::move(left), std::move(right)});
        }
        return out;
    }

    TensorPoly tensor_mul(const Profile& p, const TensorPoly& a, const TensorPoly& b)
    {
        std::size_t k = p.bounds.size();
        TensorPoly out;
        for (const auto& [al, ar] : a)
            for (const auto& [bl, br] : b) {
                Expo l(k), r(k);
                bool ok = true;
                for (std::size_t i = 0; i < k; ++i) {
                    l[i] = al[i] + bl[i];
                    r[i] = ar[i] + br[i];
                    if (l[i] >= (1 << p.bounds[i]) || r[i] >= (1 << p.bounds[i]))
                        ok = false;
                }
                if (ok)
                    toggle(out, {std::move(l), std::move(r)});
            }
        return out;
    }

    /* Middle terms of D(xi_i^{2^{h_i}}) must lie in I (x) A* + A* (x) I.  The
       relations include xi_i for i beyond the profile length (bound 0); terms
       with both indices beyond the length are in the ideal automatically, so
       i <= 2k covers everything. */
    void check_hopf_ideal(const Profile& p)
    {
        int k = static_cast<int>(p.bounds.size());
        auto bound_of = [&](int idx) { return idx >= 1 && idx <= k ? p.bounds[static_cast<std::size_t>(idx - 1)] : 0; };
        for (int i = 1; i <= 2 * k; ++i) {
            int h = bound_of(i);
            for (int j = 1; j < i; ++j) {
                bool left_in_ideal = (j + h) >= bound_of(i - j);
                bool right_in_ideal = h >= bound_of(j);
                if (!left_in_ideal && !right_in_ideal)
                    throw ValidationError(fmt::format(
                        "profile ({}) does not present a Hopf algebra: the diagonal of the relation "
                        "xi_{}^{} has the term xi_{}^{} (x) xi_{}^{} outside the relation ideal",
                        p.str(), i, 1 << h, i - j, 1 << (j + h), j, 1 << h));
            }
        }
    }

}  // namespace

int HopfAlgebra::index_of(const Expo& e) const
{
    if (e.size() != profile.bounds.size())
        return -1;
    auto it = std::lower_bound(basis.begin(), basis.end(), e, [this](const Expo& a, const Expo& b) {
        int da = expo_degree(a), db = expo_degree(b);
        if (da != db)
            return da < db;
        return a < b;
    });
    if (it == basis.end() || *it != e)
        return -1;
    return static_cast<int>(it - basis.begin());
}

F2Vec HopfAlgebra::multiply(const F2Vec& a, const F2Vec& b) const
{
    F2Vec out(static_cast<std::size_t>(dim));
    for (std::size_t i : a.set_bits())
        for (std::size_t j : b.set_bits())
            out ^= mul_basis(static_cast<int>(i), static_cast<int>(j));
    return out;
}

F2Vec HopfAlgebra::antipode_of(const F2Vec& a) const
{
    F2Vec out(static_cast<std::size_t>(dim));
    for (std::size_t i : a.set_bits())
        out ^= antipode[i];
    return out;
}

int HopfAlgebra::element_degree(const F2Vec& a) const
{
    int d = -1;
    for (std::size_t i : a.set_bits()) {
        if (d == -1)
            d = degree[i];
        else if (degree[i] != d)
            throw ValidationError("element is not homogeneous");
    }
    if (d == -1)
        throw ValidationError("zero element has no degree");
    return d;
}

std::vector<int> HopfAlgebra::generator_indices() const
{
    std::vector<int> out;
    std::size_t k = profile.bounds.size();
    for (std::size_t i = 0; i < k; ++i)
        for (int j = 0; j < profile.bounds[i]; ++j) {
            Expo e(k, 0);
            e[i] = 1 << j;
            out.push_back(index_of(e));
        }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

    void run_build_checks(const HopfAlgebra& A)
    {
        int dim = A.dim;
        const F2Vec& one = A.mul_basis(0, 0);
        if (!(one.count() == 1 && one.get(0)))
            throw Error("build check failed: unit square");
        /* closed-form dimension and top degree */
        {
            long long want_dim = 1;
            int want_top = 0;
            for (std::size_t i = 0; i < A.profile.bounds.size(); ++i) {
                want_dim <<= A.profile.bounds[i];
                want_top += ((1 << A.profile.bounds[i]) - 1) * ((1 << (i + 1)) - 1);
            }
            if (want_dim != dim || want_top != A.top_degree)
                throw Error("build check failed: dimension/top degree closed form");
            if (A.dim_at(0) != 1)
                throw Error("build check failed: not connected");
        }
        /* unital, degree additivity */
        for (int j = 0; j < dim; ++j) {
            F2Vec ej(static_cast<std::size_t>(dim));
            ej.set(static_cast<std::size_t>(j));
            if (!(A.mul_basis(0, j) == ej) || !(A.mul_basis(j, 0) == ej))
                throw Error("build check failed: unit");
        }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (std::size_t kbit : A.mul_basis(i, j).set_bits())
                    if (A.degree[kbit] != A.degree[i] + A.degree[j])
                        throw Error("build check failed: product degree");
        /* associativity on all basis triples */
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const F2Vec& ij = A.mul_basis(i, j);
                for (int k = 0; k < dim; ++k) {
                    if (A.degree[i] + A.degree[j] + A.degree[k] > A.top_degree)
                        continue;
                    F2Vec left(static_cast<std::size_t>(dim));
                    for (std::size_t a : ij.set_bits())
                        left ^= A.mul_basis(static_cast<int>(a), k);
                    F2Vec right(static_cast<std::size_t>(dim));
                    for (std::size_t b : A.mul_basis(j, k).set_bits())
                        right ^= A.mul_basis(i, static_cast<int>(b));
                    if (!(left == right))
                        throw Error("build check failed: associativity");
                }
            }
        /* cocommutativity, counit */
        for (int k = 0; k < dim; ++k) {
            int left_units = 0, right_units = 0;
            for (auto [i, j] : A.cop[k]) {
                if (std::find(A.cop[k].begin(), A.cop[k].end(), std::make_pair(j, i)) == A.cop[k].end())
                    throw Error("build check failed: cocommutativity");
                if (i == 0) {
                    ++left_units;
                    if (j != k)
                        throw Error("build check failed: counit");
                }
                if (j == 0)
                    ++right_units;
            }
            if (left_units != 1 || right_units != 1)
                throw Error("build check failed: counit");
        }
        /* coassociativity via packed triple expansion */
        for (int k = 0; k < dim; ++k) {
            std::vector<std::uint64_t> left, right;
            for (auto [a, b] : A.cop[k]) {
                for (auto [c, d] : A.cop[a])
                    left.push_back((std::uint64_t(c) << 40) | (std::uint64_t(d) << 20) | std::uint64_t(b));
                for (auto [c, d] : A.cop[b])
                    right.push_back((std::uint64_t(a) << 40) | (std::uint64_t(c) << 20) | std::uint64_t(d));
            }
            auto normalize = [](std::vector<std::uint64_t>& v) {
                std::sort(v.begin(), v.end());
                std::vector<std::uint64_t> out;
                for (std::size_t i = 0; i < v.size();) {
                    std::size_t j = i;
                    while (j < v.size() && v[j] == v[i])
                        ++j;
                    if ((j - i) & 1)
                        out.push_back(v[i]);
                    i = j;
                }
                v = std::move(out);
            };
            normalize(left);
            normalize(right);
            if (left != right)
                throw Error("build check failed: coassociativity");
        }
        /* Hopf axiom: sum chi(e_i) e_j over the diagonal = unit in degree 0, else 0 */
        for (int k = 0; k < dim; ++k) {
            F2Vec acc(static_cast<std::size_t>(dim));
            for (auto [i, j] : A.cop[k]) {
                F2Vec ej(static_cast<std::size_t>(dim));
                ej.set(static_cast<std::size_t>(j));
                acc ^= A.multiply(A.antipode[i], ej);
            }
            F2Vec want(static_cast<std::size_t>(dim));
            if (k == 0)
                want.set(0);
            if (!(acc == want))
                throw Error("build check failed: antipode axiom");
        }
    }

}  // namespace

std::shared_ptr<const HopfAlgebra> build_algebra(const Profile& p)
{
    p.validate();
    check_hopf_ideal(p);

    auto A = std::make_shared<HopfAlgebra>();
    A->profile = p;
    std::size_t k = p.bounds.size();

    /* enumerate the monomial basis of the dual quotient */
    std::vector<Expo> all;
    Expo cur(k, 0);
    while (true) {
        all.push_back(cur);
        std::size_t i = 0;
        while (i < k) {
            if (++cur[i] < (1 << p.bounds[i]))
                break;
            cur[i] = 0;
            ++i;
        }
        if (i == k)
            break;
    }
    std::sort(all.begin(), all.end(), [](const Expo& a, const Expo& b) {
        int da = expo_degree(a), db = expo_degree(b);
        if (da != db)
            return da < db;
        return a < b;
    });
    A->basis = std::move(all);
    A->dim = static_cast<int>(A->basis.size());
    for (const Expo& e : A->basis)
        A->degree.push_back(expo_degree(e));
    A->top_degree = A->degree.back();
    A->degree_first.assign(static_cast<std::size_t>(A->top_degree) + 2, 0);
    for (int d = 0, idx = 0; d <= A->top_degree + 1; ++d) {
        while (idx < A->dim && A->degree[idx] < d)
            ++idx;
        A->degree_first[d] = idx;
    }

    std::size_t dim = static_cast<std::size_t>(A->dim);

    /* dual diagonal of every basis monomial, via Frobenius powers of the Milnor diagonal */
    std::vector<std::vector<std::pair<int, int>>> diag(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        TensorPoly acc;
        toggle(acc, {Expo(k, 0), Expo(k, 0)});
        const Expo& e = A->basis[m];
        for (std::size_t i = 0; i < k; ++i)
            for (int b = 0; (1 << b) <= e[i]; ++b)
                if (e[i] & (1 << b))
                    acc = tensor_mul(p, acc, diagonal_of_power(p, static_cast<int>(i) + 1, b));
        for (const auto& [l, r] : acc)
            diag[m].emplace_back(A->index_of(l), A->index_of(r));
        std::sort(diag[m].begin(), diag[m].end());
    }

    /* primal product from the dual diagonal */
    A->mult.assign(dim * dim, F2Vec(dim));
    for (std::size_t m = 0; m < dim; ++m)
        for (auto [i, j] : diag[m])
            A->mult[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)].set(m);

    /* primal coproduct from the dual product: pairs of exponent tuples summing to e */
    A->cop.assign(dim, {});
    for (std::size_t m = 0; m < dim; ++m) {
        const Expo& e = A->basis[m];
        Expo sub(k, 0);
        while (true) {
            Expo rest(k);
            for (std::size_t i = 0; i < k; ++i)
                rest[i] = e[i] - sub[i];
            A->cop[m].emplace_back(A->index_of(sub), A->index_of(rest));
            std::size_t i = 0;
            while (i < k) {
                if (++sub[i] <= e[i])
                    break;
                sub[i] = 0;
                ++i;
            }
            if (i == k)
                break;
        }
        std::sort(A->cop[m].begin(), A->cop[m].end());
    }

    /* antipode by induction over degree: chi(a) = a + sum chi(a') a'' over middle terms */
    A->antipode.assign(dim, F2Vec(dim));
    for (std::size_t m = 0; m < dim; ++m) {
        F2Vec chi(dim);
        chi.set(m);
        for (auto [i, j] : A->cop[m]) {
            if (i == 0 || j == 0)
                continue;
            F2Vec ej(dim);
            ej.set(static_cast<std::size_t>(j));
            chi ^= A->multiply(A->antipode[static_cast<std::size_t>(i)], ej);
        }
        A->antipode[m] = std::move(chi);
    }

    run_build_checks(*A);

    /* socle pairing lambda(e_i e_j) = coefficient of the top element; its inverse
       provides the dual family used by free-summand splitting */
    {
        std::size_t top = dim - 1;
        F2Matrix aug(dim, 2 * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j)
                if (A->mult[i * dim + j].get(top))
                    aug.set(i, j);
            aug.set(i, dim + i);
        }
        RrefResult r = rref(std::move(aug));
        if (r.rank != dim || r.pivots[dim - 1] != dim - 1)
            throw Error("build check failed: socle pairing is degenerate");
        A->socle_dual.assign(dim, F2Vec(dim));
        /* G^{-1} sits in the right half; column j of G^{-1} solves G c = delta_j */
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                if (r.reduced.get(i, dim + j))
                    A->socle_dual[j].set(i);
    }

    return A;
}

std::shared_ptr<const HopfAlgebra> algebra_cache(const Profile& p)
{
    static std::mutex mu;
    static std::map<Profile, std::shared_ptr<const HopfAlgebra>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end())
        return it->second;
    auto A = build_algebra(p);
    cache.emplace(p, A);
    return A;
}

namespace {

    Expo parse_sq_syntax(std::string_view name, std::size_t k)
    {
        /* "Sq(r1,...,rk)" */
        std::string_view inner = name.substr(3, name.size() - 4);
        Expo e;
        std::string cur;
        auto flush = [&] {
            if (cur.empty())
                throw ValidationError(fmt::format("bad element name '{}'", name));
            e.push_back(std::atoi(cur.c_str()));
            cur.clear();
        };
        for (char c : inner) {
            if (c == ',')
                flush();
            else if (!std::isspace(static_cast<unsigned char>(c)))
                cur.push_back(c);
        }
        flush();
        if (e.size() > k)
            throw ValidationError(fmt::format("element '{}' needs {} generators but the profile has {}", name,
                                              e.size(), k));
        e.resize(k, 0);
        return e;
    }

}  // namespace

NamedElement named_element(const HopfAlgebra& alg, std::string_view name)
{
    std::size_t k = alg.profile.bounds.size();
    Expo e(k, 0);
    if (name == "Q0")
        e[0] = 1;
    else if (name == "Q1" || name == "Q2") {
        std::size_t i = static_cast<std::size_t>(name[1] - '0');
        if (i >= k)
            throw ValidationError(fmt::format("element {} does not exist under profile ({})", name,
                                              alg.profile.str()));
        e[i] = 1;
    }
    else if (name == "P21") {
        if (k < 2)
            throw ValidationError(fmt::format("element P21 does not exist under profile ({})", alg.profile.str()));
        e[1] = 2;
    }
    else if (name == "Sq1")
        e[0] = 1;
    else if (name == "Sq2")
        e[0] = 2;
    else if (name == "Sq4")
        e[0] = 4;
    else if (name.size() > 4 && name.substr(0, 3) == "Sq(" && name.back() == ')')
        e = parse_sq_syntax(name, k);
    else
        throw ValidationError(fmt::format("unknown element name '{}'", name));

    int idx = alg.index_of(e);
    if (idx < 0)
        throw ValidationError(fmt::format("element {} = {} is not in the subalgebra of profile ({})", name,
                                          expo_str(e), alg.profile.str()));
    NamedElement out;
    out.name = std::string(name);
    out.basis_index = idx;
    out.element = F2Vec(static_cast<std::size_t>(alg.dim));
    out.element.set(static_cast<std::size_t>(idx));
    return out;
}

bool has_named_element(const HopfAlgebra& alg, std::string_view name)
{
    try {
        named_element(alg, name);
        return true;
    }
    catch (const ValidationError&) {
        return false;
    }
}

QuotientReport quotient_pair(const Profile& sub, const Profile& amb)
{
    sub.validate();
    amb.validate();
    if (!sub.contained_in(amb))
        throw ValidationError(fmt::format("profile ({}) is not contained in profile ({})", sub.str(), amb.str()));

    auto A = algebra_cache(amb);
    QuotientReport rep;
    rep.sub = sub;
    rep.amb = amb;

    auto B = algebra_cache(sub);
    rep.sub_top_degree = B->top_degree;

    /* embed the subalgebra basis into ambient indices */
    std::vector<int> b_in_a;
    for (const Expo& e : B->basis) {
        Expo padded = e;
        padded.resize(amb.bounds.size(), 0);
        b_in_a.push_back(A->index_of(padded));
    }

    /* conormality: compare the degreewise spans of A B+ and B+ A */
    rep.conormal = true;
    std::size_t dim = static_cast<std::size_t>(A->dim);
    for (int d = 1; d <= A->top_degree && rep.conormal; ++d) {
        RowSpace left(dim), right(dim);
        for (int a = 0; a < A->dim; ++a)
            for (std::size_t bi = 1; bi < b_in_a.size(); ++bi) {
                int b = b_in_a[bi];
                if (A->degree[a] + A->degree[b] != d)
                    continue;
                left.insert(A->mul_basis(a, b));
                right.insert(A->mul_basis(b, a));
            }
        if (left.dim() != right.dim() || !(left.rows() == right.rows()))
            rep.conormal = false;
    }

    /* quotient dual basis: ambient monomials whose exponents are multiples of
       the subalgebra's relation exponents */
    for (const Expo& e : A->basis) {
        bool in_quotient = true;
        for (std::size_t i = 0; i < sub.bounds.size() && in_quotient; ++i)
            if (e[i] % (1 << sub.bounds[i]) != 0)
                in_quotient = false;
        if (in_quotient)
            rep.quotient_dual_basis.push_back(e);
    }

    if (rep.quotient_dual_basis.size() == 2) {
        rep.exterior_rank_one = true;
        rep.tau = rep.quotient_dual_basis[1];
        rep.tau_degree = expo_degree(rep.tau);
    }
    return rep;
}

}  // namespace stmod
