#include "stmod/moddoc.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <numeric>

namespace stmod {

namespace {

    struct BasisLayout {
        int lo = 0;
        std::vector<int> dims;
        std::vector<std::pair<int, int>> id_to_pos;  // global id -> (degree, index within degree)

        explicit BasisLayout(const std::vector<int>& gen_degrees)
        {
            if (gen_degrees.empty())
                return;
            std::vector<std::size_t> order(gen_degrees.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return gen_degrees[a] < gen_degrees[b]; });
            lo = gen_degrees[order.front()];
            int hi = gen_degrees[order.back()];
            dims.assign(static_cast<std::size_t>(hi - lo) + 1, 0);
            id_to_pos.resize(gen_degrees.size());
            for (std::size_t id = 0; id < order.size(); ++id) {
                int d = gen_degrees[order[id]];
                id_to_pos[id] = {d, dims[static_cast<std::size_t>(d - lo)]++};
            }
        }
    };

}  // namespace

GradedModule load_module_json(const nlohmann::json& doc)
{
    if (!doc.contains("algebra") || !doc["algebra"].contains("profile"))
        throw ValidationError("module document lacks algebra.profile");
    Profile p;
    for (const auto& v : doc["algebra"]["profile"])
        p.bounds.push_back(v.get<int>());
    p.validate();
    auto A = algebra_cache(p);

    if (!doc.contains("generators"))
        throw ValidationError("module document lacks generators");
    std::vector<int> gen_degrees = doc["generators"].get<std::vector<int>>();
    if (gen_degrees.empty())
        return zero_module(A);

    BasisLayout layout(gen_degrees);
    GradedModule M;
    M.alg = A;
    M.lo = layout.lo;
    M.dims = layout.dims;

    /* declared op actions, as per-degree column lists */
    struct OpAction {
        int basis_index;
        std::vector<std::vector<F2Vec>> cols;  // per degree-index of M
    };
    std::map<std::string, OpAction> ops;
    std::map<std::pair<std::string, int>, bool> seen;
    if (doc.contains("actions")) {
        for (const auto& rec : doc["actions"]) {
            std::string op = rec.at("op").get<std::string>();
            int src = rec.at("src").get<int>();
            std::vector<int> dst = rec.at("dst").get<std::vector<int>>();
            if (src < 0 || static_cast<std::size_t>(src) >= layout.id_to_pos.size())
                throw ValidationError(fmt::format("action src id {} out of range", src));
            if (seen.count({op, src}))
                throw ValidationError(fmt::format("duplicate action record for op {} src {}", op, src));
            seen[{op, src}] = true;

            auto it = ops.find(op);
            if (it == ops.end()) {
                NamedElement el = named_element(*A, op);
                OpAction act;
                act.basis_index = el.basis_index;
                int db = A->degree[static_cast<std::size_t>(el.basis_index)];
                act.cols.resize(M.dims.size());
                for (std::size_t di = 0; di < M.dims.size(); ++di)
                    act.cols[di].assign(static_cast<std::size_t>(M.dims[di]),
                                        F2Vec(static_cast<std::size_t>(M.dim_at(M.lo + static_cast<int>(di) + db))));
                it = ops.emplace(op, std::move(act)).first;
            }
            int db = A->degree[static_cast<std::size_t>(it->second.basis_index)];
            auto [sd, sc] = layout.id_to_pos[static_cast<std::size_t>(src)];
            for (int d : dst) {
                if (d < 0 || static_cast<std::size_t>(d) >= layout.id_to_pos.size())
                    throw ValidationError(fmt::format("action dst id {} out of range", d));
                auto [td, tc] = layout.id_to_pos[static_cast<std::size_t>(d)];
                if (td != sd + db)
                    throw ValidationError(fmt::format(
                        "degree-inconsistent action entry: {} maps degree {} to degree {} but has degree {}", op,
                        sd, td, db));
                it->second.cols[static_cast<std::size_t>(sd - M.lo)][static_cast<std::size_t>(sc)].set(
                    static_cast<std::size_t>(tc));
            }
        }
    }

    /* Span the subalgebra generated by the declared ops, degree by degree,
       tracking each word's action matrices.  Every algebra basis element that
       can act nontrivially by grading must land in the span; the others act
       as zero (omitted actions are zero). */
    struct Entry {
        F2Vec alg_vec;
        int deg;
        std::vector<std::vector<F2Vec>> cols;  // per degree-index of M
    };
    std::vector<Entry> entries;
    std::map<int, TrackedRowSpace> spans;          // per algebra degree
    std::map<int, std::vector<std::size_t>> bucket;  // per-degree entry indices, insertion order

    auto span_at = [&](int d) -> TrackedRowSpace& {
        auto it = spans.find(d);
        if (it == spans.end())
            it = spans.emplace(d, TrackedRowSpace(static_cast<std::size_t>(A->dim))).first;
        return it->second;
    };
    {
        Entry unit;
        unit.alg_vec = F2Vec(static_cast<std::size_t>(A->dim));
        unit.alg_vec.set(0);
        unit.deg = 0;
        unit.cols.resize(M.dims.size());
        for (std::size_t di = 0; di < M.dims.size(); ++di) {
            unit.cols[di].assign(static_cast<std::size_t>(M.dims[di]),
                                 F2Vec(static_cast<std::size_t>(M.dims[di])));
            for (int c = 0; c < M.dims[di]; ++c)
                unit.cols[di][static_cast<std::size_t>(c)].set(static_cast<std::size_t>(c));
        }
        span_at(0).insert(unit.alg_vec);
        bucket[0].push_back(0);
        entries.push_back(std::move(unit));
    }
    for (std::size_t w = 0; w < entries.size(); ++w) {
        for (auto& [name, op] : ops) {
            int db = A->degree[static_cast<std::size_t>(op.basis_index)];
            int deg = entries[w].deg + db;
            if (deg > A->top_degree)
                continue;
            F2Vec gv(static_cast<std::size_t>(A->dim));
            gv.set(static_cast<std::size_t>(op.basis_index));
            F2Vec prod = A->multiply(gv, entries[w].alg_vec);
            if (prod.none() || (spans.count(deg) && span_at(deg).contains(prod)))
                continue;
            Entry e;
            e.alg_vec = prod;
            e.deg = deg;
            e.cols.resize(M.dims.size());
            for (std::size_t di = 0; di < M.dims.size(); ++di) {
                int d = M.lo + static_cast<int>(di);
                e.cols[di].assign(static_cast<std::size_t>(M.dims[di]),
                                  F2Vec(static_cast<std::size_t>(M.dim_at(d + deg))));
                if (M.dim_at(d + deg) == 0 || M.dim_at(d + entries[w].deg) == 0)
                    continue;
                std::size_t tdi = static_cast<std::size_t>(d + entries[w].deg - M.lo);
                for (int c = 0; c < M.dims[di]; ++c) {
                    const F2Vec& wimg = entries[w].cols[di][static_cast<std::size_t>(c)];
                    auto& out = e.cols[di][static_cast<std::size_t>(c)];
                    for (std::size_t x : wimg.set_bits())
                        out ^= op.cols[tdi][x];
                }
            }
            span_at(deg).insert(prod);
            bucket[deg].push_back(entries.size());
            entries.push_back(std::move(e));
        }
    }

    init_action_shape(M);
    for (int k = 1; k < A->dim; ++k) {
        int dk = A->degree[static_cast<std::size_t>(k)];
        bool relevant = false;
        for (int d = M.lo; d <= M.hi() && !relevant; ++d)
            if (M.dim_at(d) > 0 && M.dim_at(d + dk) > 0)
                relevant = true;
        if (!relevant)
            continue;  // forced zero by grading
        F2Vec ek(static_cast<std::size_t>(A->dim));
        ek.set(static_cast<std::size_t>(k));
        std::optional<F2Vec> combo;
        if (spans.count(dk))
            combo = span_at(dk).express(ek);
        if (!combo) {
            std::vector<std::string> names;
            for (auto& [name, op] : ops)
                names.push_back(name);
            throw ValidationError(fmt::format(
                "declared generators [{}] do not generate the algebra of profile ({}): {} is unreachable",
                fmt::join(names, ", "), p.str(), expo_str(A->basis[static_cast<std::size_t>(k)])));
        }
        for (std::size_t i : combo->set_bits()) {
            const Entry& e = entries[bucket[dk][i]];
            for (std::size_t di = 0; di < M.dims.size(); ++di)
                for (int c = 0; c < M.dims[di]; ++c)
                    M.action[static_cast<std::size_t>(k)][di][static_cast<std::size_t>(c)] ^=
                        e.cols[di][static_cast<std::size_t>(c)];
        }
    }

    check_module_axioms(M);
    return M;
}

GradedModule load_module_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError(fmt::format("cannot read module document '{}'", path));
    nlohmann::json doc;
    try {
        in >> doc;
    }
    catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("module document '{}' is not valid JSON: {}", path, e.what()));
    }
    return load_module_json(doc);
}

nlohmann::ordered_json save_module_json(const GradedModule& M)
{
    nlohmann::ordered_json doc;
    doc["algebra"]["profile"] = M.alg->profile.bounds;
    std::vector<int> gens;
    for (int d = M.lo; d <= M.hi(); ++d)
        for (int c = 0; c < M.dim_at(d); ++c)
            gens.push_back(d);
    doc["generators"] = gens;

    /* global id of basis (d, c) */
    auto id_of = [&](int d, int c) {
        int id = 0;
        for (int e = M.lo; e < d; ++e)
            id += M.dim_at(e);
        return id + c;
    };

    nlohmann::ordered_json actions = nlohmann::ordered_json::array();
    for (int g : M.alg->generator_indices()) {
        int dg = M.alg->degree[static_cast<std::size_t>(g)];
        std::string op = expo_str(M.alg->basis[static_cast<std::size_t>(g)]);
        for (int d = M.lo; d <= M.hi(); ++d) {
            if (M.dim_at(d) == 0 || M.dim_at(d + dg) == 0)
                continue;
            for (int c = 0; c < M.dim_at(d); ++c) {
                const F2Vec& img = M.column(g, d, c);
                if (img.none())
                    continue;
                nlohmann::ordered_json rec;
                rec["op"] = op;
                rec["src"] = id_of(d, c);
                std::vector<int> dst;
                for (std::size_t x : img.set_bits())
                    dst.push_back(id_of(d + dg, static_cast<int>(x)));
                rec["dst"] = dst;
                actions.push_back(rec);
            }
        }
    }
    doc["actions"] = actions;
    return doc;
}

void save_module_file(const GradedModule& M, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw ValidationError(fmt::format("cannot write module document '{}'", path));
    out << save_module_json(M).dump(2) << '\n';
}

}  // namespace stmod
