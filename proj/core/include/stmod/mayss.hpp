#pragma once

/*
 * Bounded-range May spectral sequence engine.
 *
 * The E1 page is the polynomial algebra on the classes h_{ij} admissible
 * under the profile (j < h_i), with tridegree (1, 2^j(2^i-1), 2i-1).  The
 * first differential is generated from the coproduct formula
 *     d1(h_{i,j}) = sum_{0<k<i} h_{i-k,k+j} h_{k,j}
 * and extended as a derivation.  Higher differentials are input data: table
 * entries (page, source, target) extended by the Leibniz rule over F2 to all
 * products of page classes; page classes outside that span are permanent
 * cycles by contract.  Differentials preserve t and raise s by one, so a
 * t-truncated run is exact.
 */

#include "stmod/milnor.hpp"
#include "stmod/resolution.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace stmod {

struct MayGen {
    int i = 0, j = 0;
    int t = 0, w = 0;  // internal degree and May weight
    std::string name;  // "h10", "h21", ...
};

struct MayRing {
    Profile profile;
    int s_max = 0, t_max = 0;  // reporting window; monomials enumerated to s_max+1
    std::vector<MayGen> gens;

    std::vector<std::vector<std::uint8_t>> monos;  // id -> exponent vector
    std::map<std::vector<std::uint8_t>, int> ids;
    std::vector<std::pair<int, int>> st;  // id -> (s,t)
    std::vector<int> weight;              // id -> May weight

    std::map<std::pair<int, int>, std::vector<int>> slices;  // (s,t) -> sorted ids

    int find_gen(const std::string& name) const;  // -1 when absent
    int mono_id(const std::vector<std::uint8_t>& e) const;  // -1 when outside the window
    const std::vector<int>& slice(int s, int t) const;
    std::string mono_str(int id) const;
};

std::shared_ptr<const MayRing> may_ring(const Profile& p, int s_max, int t_max);

/* polynomials are carried as coordinate vectors over a slice's monomials */
struct MayPolySlice {
    int s = 0, t = 0;
    F2Vec coords;
    bool zero() const { return coords.none(); }
};

std::string poly_str(const MayRing& ring, const MayPolySlice& p);

/* d1 of a single monomial, from the coproduct-derived derivation */
MayPolySlice d1_monomial(const MayRing& ring, int id);
/* nonzero d1 values on the ring generators */
std::vector<std::pair<std::string, std::string>> d1_on_generators(const MayRing& ring);

struct MayDifferential {
    int page = 0;
    std::string source, target;  // polynomial strings over the h-tokens
};

struct DifferentialTable {
    std::vector<MayDifferential> entries;

    static DifferentialTable from_json(const nlohmann::json& doc);
    static DifferentialTable builtin(const Profile& p);
};

/* one page of the run: per (s,t) a basis of surviving classes, held as
   polynomials in the E1 monomials */
struct MayPage {
    std::shared_ptr<const MayRing> ring;
    int r = 1;

    struct Slice {
        std::vector<F2Vec> reps;  // representatives, reduced mod boundaries
        RowSpace boundaries;      // accumulated boundary span
        Slice() : boundaries(0) {}
    };
    std::map<std::pair<int, int>, Slice> data;

    int dim_at(int s, int t) const;
    std::map<std::pair<int, int>, int> dims() const;  // nonzero entries, s <= s_max
};

struct MayRunReport {
    MayPage einf;
    std::vector<std::pair<std::string, std::string>> d1_generators;  // nonzero d1 on gens
    std::vector<std::string> applied;  // "d2(h20^2) = h11^3" style notes
    std::vector<std::string> skipped;  // entries outside the window
};

MayPage may_e1(const Profile& p, int s_max, int t_max);

/* run the spectral sequence: automatic d1, then the table's pages in order;
   throws ValidationError on dead sources, non-cycle targets or Leibniz
   inconsistencies, naming the offending entry */
MayRunReport run_ss(const Profile& p, const DifferentialTable& table, int s_max, int t_max);

struct EinfExtComparison {
    struct Entry {
        int s, t;
        int may_dim, ext_dim;
    };
    std::vector<Entry> mismatches;  // sorted by (t, s)
    int checked = 0;
    bool clean() const { return mismatches.empty(); }
};

/* per-(s,t) equality of E-infinity dims and chart dims on the overlap */
EinfExtComparison compare_einfty_ext(const MayPage& page, const ExtChart& chart);

}  // namespace stmod
