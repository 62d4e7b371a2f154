#pragma once

/*
 * Minimal free resolutions, bigraded Ext charts and Yoneda products.
 *
 * Resolutions are computed degree by degree inside a (s_max, t_max) window.
 * Level-s generators are a basis of ker(d_{s-1}) / A+ ker(d_{s-1}), so the
 * chart dims can be read off the generator counts.  Products lift cocycles
 * to chain maps of the resolution of the unit.
 */

#include "stmod/gmod.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace stmod {

struct Resolution {
    std::shared_ptr<const HopfAlgebra> alg;
    GradedModule target;  // level -1
    int t_max = 0;

    struct Level {
        std::vector<int> gen_deg;  // ascending
        /* image of each generator: coordinates in the previous level's slice
           at the generator's degree (for level 0: a vector in the target) */
        std::vector<F2Vec> d_gen;
    };
    std::vector<Level> levels;

    /* cached differential matrices per (level, degree); rows = previous level */
    std::vector<std::map<int, F2Matrix>> dmat;

    int s_max() const { return static_cast<int>(levels.size()) - 1; }

    /* free-module slice bookkeeping at (s, t): blocks per generator, inner
       index = algebra basis offset within its degree */
    int slice_dim(int s, int t) const;
    int slice_offset(int s, int t, int g) const;
    /* coordinate of (generator g, algebra basis b) in the slice at (s, deg) */
    int slice_coord(int s, int g, int b) const;

    /* b . v for v in the slice at (s, t) */
    F2Vec act(int s, int b, int t, const F2Vec& v) const;

    int gens_at(int s, int t) const;
};

Resolution minimal_resolution(const GradedModule& M, int s_max, int t_max);

/* window wide enough that every kernel of d_s (s < s_levels) is complete */
Resolution minimal_resolution_full(const GradedModule& M, int s_levels);

/* ker(d_{s-1}) inside P^{s-1} as a module; requires a full window */
GradedModule kernel_module(const Resolution& res, int s);

struct ExtClass {
    int s = 0, t = 0;
    F2Vec coeffs;  // over the level-s generators of degree t
    bool zero() const { return coeffs.none(); }
    bool operator==(const ExtClass&) const = default;
};

struct ExtChart {
    std::shared_ptr<const Resolution> res;
    int s_max = 0, t_max = 0;
    std::map<std::pair<int, int>, int> dims;     // nonzero (s,t) entries
    std::map<std::string, ExtClass> named;       // h10, h11, ... where defined
    bool unit_target = false;                    // products only make sense here

    int dim_at(int s, int t) const
    {
        auto it = dims.find({s, t});
        return it == dims.end() ? 0 : it->second;
    }
};

ExtChart ext_chart(const GradedModule& M, int s_max, int t_max);
ExtChart ext_chart_unit(std::shared_ptr<const HopfAlgebra> alg, int s_max, int t_max);

/* the unique class at (s,t); throws unless the group there is 1-dimensional */
ExtClass ext_class_at(const ExtChart& chart, int s, int t);
ExtClass named_class(const ExtChart& chart, const std::string& name);

/* chain maps of a class lifted through `depth` levels of the resolution */
struct ChainLift {
    ExtClass cls;
    int depth = 0;
    /* lift[k][g]: coordinates in the slice at (k, deg(g) - t) for generator g
       of level s + k */
    std::vector<std::vector<F2Vec>> lift;
};

ChainLift lift_class(const Resolution& res, const ExtClass& y, int depth);

/* Yoneda product on the chart of the unit; bidegrees add.  Throws WindowError
   when the window cannot hold the product. */
ExtClass yoneda_product(const ExtChart& chart, const ExtClass& x, const ExtClass& y);

/* smallest q <= cap with x^q = 0, or nothing; throws WindowError when the
   window is exhausted before a decision */
std::optional<int> nilpotency_order(const ExtChart& chart, const ExtClass& x, int cap);

/* test support: exactness, minimality, and the cocycle-rank recount */
void verify_resolution(const Resolution& res);

}  // namespace stmod
