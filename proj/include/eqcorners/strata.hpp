#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "eqcorners/group.hpp"
#include "eqcorners/linalg.hpp"

namespace eqc {

// One conjugacy class of isotropy groups of a linear action, together with
// the geometry of its stratum: the fixed subspace of the representative and
// the orbit of that subspace under the full group.
struct IsotropyType {
    int class_id = -1;
    Subgroup representative;              // K, Galois-closed against fixed_space
    Subspace fixed_space;                 // canonical orbit representative
    std::vector<Subspace> orbit_subspaces;
    int stratum_codim = 0;                // within the model space
    int group_order = 0;
};

// Conjugacy classes of isotropy groups ordered by: I' <= I iff the
// representative of I is conjugate to a subgroup of a representative of I'.
// Minimal elements are the classes with the largest isotropy groups; the
// principal class (representation kernel) is the unique maximum.
struct IsotropyPoset {
    MatrixGroup group;
    Subspace space;
    std::vector<IsotropyType> types;
    std::vector<std::vector<bool>> leq_matrix; // leq_matrix[below][above]
    int principal = -1;

    bool leq(int below, int above) const { return leq_matrix[below][above]; }

    // Type owning a given lattice member.
    int type_of_member(const Subspace& w) const {
        for (const IsotropyType& t : types)
            for (const Subspace& s : t.orbit_subspaces)
                if (s == w)
                    return t.class_id;
        throw Error("type_of_member: subspace is not a lattice member");
    }

    int type_of_class(const Subgroup& k) const {
        for (const IsotropyType& t : types)
            if (are_conjugate(group, t.representative, k))
                return t.class_id;
        return -1;
    }

    std::vector<int> minimal_types() const {
        std::vector<int> out;
        for (const IsotropyType& t : types) {
            bool minimal = true;
            for (const IsotropyType& u : types)
                if (u.class_id != t.class_id && leq(u.class_id, t.class_id)) {
                    minimal = false;
                    break;
                }
            if (minimal)
                out.push_back(t.class_id);
        }
        return out;
    }

    // Covering relations of the partial order, for export.
    std::vector<std::pair<int, int>> cover_relations() const {
        std::vector<std::pair<int, int>> covers;
        const int n = static_cast<int>(types.size());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b || !leq(a, b))
                    continue;
                bool direct = true;
                for (int c = 0; c < n; ++c)
                    if (c != a && c != b && leq(a, c) && leq(c, b)) {
                        direct = false;
                        break;
                    }
                if (direct)
                    covers.emplace_back(a, b);
            }
        return covers;
    }
};

namespace detail {
inline void check_preserves_space(const MatrixGroup& g, const Subspace& space) {
    for (int i = 0; i < g.order(); ++i)
        if (!(g.act(i, space) == space))
            throw Error("group does not preserve the model subspace");
}
} // namespace detail

// Closure under pairwise intersection of the per-element fixed loci within
// `space`, together with `space` itself. Every member is Galois-closed:
// K(W) recovers W as its fixed locus.
inline std::vector<Subspace> intersection_lattice(const MatrixGroup& g, const Subspace& space) {
    detail::check_preserves_space(g, space);
    std::set<Subspace> members;
    members.insert(space);
    for (int i = 0; i < g.order(); ++i)
        members.insert(intersect(space, fixed_subspace({g.matrix(i)}, g.ambient_dim())));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Subspace> snapshot(members.begin(), members.end());
        for (std::size_t a = 0; a < snapshot.size(); ++a)
            for (std::size_t b = a + 1; b < snapshot.size(); ++b)
                if (members.insert(intersect(snapshot[a], snapshot[b])).second)
                    grew = true;
    }
    return {members.begin(), members.end()};
}

inline std::vector<Subspace> intersection_lattice(const MatrixGroup& g) {
    return intersection_lattice(g, Subspace::full(g.ambient_dim()));
}

inline IsotropyPoset isotropy_poset(const MatrixGroup& g, const Subspace& space) {
    IsotropyPoset poset;
    poset.group = g;
    poset.space = space;
    std::vector<Subspace> lattice = intersection_lattice(g, space);

    // Group lattice members into G-orbits; one isotropy type per orbit.
    std::set<Subspace> unseen(lattice.begin(), lattice.end());
    std::vector<IsotropyType> types;
    while (!unseen.empty()) {
        Subspace w = *unseen.begin();
        std::set<Subspace> orbit;
        for (int i = 0; i < g.order(); ++i)
            orbit.insert(g.act(i, w));
        for (const Subspace& s : orbit)
            unseen.erase(s);
        IsotropyType t;
        t.fixed_space = *orbit.begin(); // canonical (minimal) representative
        t.orbit_subspaces.assign(orbit.begin(), orbit.end());
        t.representative = pointwise_stabilizer(g, t.fixed_space);
        t.stratum_codim = space.dim() - t.fixed_space.dim();
        t.group_order = t.representative.order();
        types.push_back(std::move(t));
    }
    std::sort(types.begin(), types.end(), [](const IsotropyType& a, const IsotropyType& b) {
        if (a.group_order != b.group_order)
            return a.group_order > b.group_order;
        return a.fixed_space < b.fixed_space;
    });
    for (std::size_t i = 0; i < types.size(); ++i)
        types[i].class_id = static_cast<int>(i);
    poset.types = std::move(types);

    const int n = static_cast<int>(poset.types.size());
    poset.leq_matrix.assign(n, std::vector<bool>(n, false));
    for (int below = 0; below < n; ++below)
        for (int above = 0; above < n; ++above)
            poset.leq_matrix[below][above] = conjugate_into(
                g, poset.types[above].representative, poset.types[below].representative);

    for (int i = 0; i < n; ++i)
        if (poset.types[i].fixed_space == space)
            poset.principal = i;
    if (poset.principal < 0)
        throw Error("isotropy_poset: principal class not found");
    return poset;
}

inline IsotropyPoset isotropy_poset(const MatrixGroup& g) {
    return isotropy_poset(g, Subspace::full(g.ambient_dim()));
}

// Incidence pairs (I, J): some orbit subspace of J lies in one of I.
inline std::vector<std::pair<int, int>> closure_incidence(const IsotropyPoset& p) {
    std::vector<std::pair<int, int>> pairs;
    for (const IsotropyType& i : p.types)
        for (const IsotropyType& j : p.types) {
            if (i.class_id == j.class_id)
                continue;
            bool found = false;
            for (const Subspace& wi : i.orbit_subspaces) {
                for (const Subspace& wj : j.orbit_subspaces)
                    if (wi.contains(wj) && !(wi == wj)) {
                        found = true;
                        break;
                    }
                if (found)
                    break;
            }
            if (found)
                pairs.emplace_back(i.class_id, j.class_id);
        }
    return pairs;
}

namespace detail {

// Scale a nonzero point into the open unit box; linear-group stabilizers and
// lattice membership are scale invariant.
inline Vec shrink_into_box(Vec v) {
    Rational m = 0;
    for (const Rational& x : v)
        if (abs(x) > m)
            m = abs(x);
    if (m >= 1) {
        Rational f = Rational(1) / (2 * m);
        for (Rational& x : v)
            x *= f;
    }
    return v;
}

} // namespace detail

// Deterministic rational points in the stratum of type `t`: inside its fixed
// space, avoiding every strictly smaller lattice member, each checked to
// realize the type's isotropy class.
inline std::vector<Vec> stratum_points(const IsotropyPoset& p, const IsotropyType& t, int count,
                                       std::uint64_t seed) {
    if (count < 1)
        throw Error("stratum_points: count must be >= 1");
    std::vector<Subspace> lattice = intersection_lattice(p.group, p.space);
    std::vector<Subspace> traces;
    for (const Subspace& w : lattice)
        if (!w.contains(t.fixed_space))
            traces.push_back(intersect(w, t.fixed_space));
    const Subspace& w = t.fixed_space;
    std::vector<Vec> out;
    SplitMix64 rng(hash_combine(seed, 0x5A5Au));
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 200 * count)
            throw StratumEmpty("stratum_points: could not sample the stratum");
        if (w.dim() == 0) {
            Vec v(p.group.ambient_dim(), Rational(0));
            if (!are_conjugate(p.group, point_stabilizer(p.group, v), t.representative))
                throw StratumEmpty("stratum_points: zero subspace is not this stratum");
            out.push_back(v);
            continue;
        }
        Vec coeff(w.dim());
        for (int i = 0; i < w.dim(); ++i)
            coeff[i] = rng.small_rational();
        Vec v = detail::shrink_into_box(from_coordinates(w, coeff));
        bool ok = true;
        for (const Subspace& tr : traces)
            if (ok && tr.contains_vector(v))
                ok = false;
        if (!ok)
            continue;
        Subgroup stab = point_stabilizer(p.group, v);
        if (!are_conjugate(p.group, stab, t.representative))
            continue;
        out.push_back(std::move(v));
    }
    return out;
}

// --- verification helpers -------------------------------------------------

struct CheckReport {
    bool pass = true;
    std::vector<std::string> failures;

    void fail(const std::string& msg) {
        pass = false;
        failures.push_back(msg);
    }
};

// For every lattice member W: the fixed space of K(W) within the model is
// exactly W, and the pairing is antitone.
inline CheckReport galois_check(const MatrixGroup& g, const Subspace& space) {
    CheckReport report;
    std::vector<Subspace> lattice = intersection_lattice(g, space);
    for (const Subspace& w : lattice) {
        Subgroup k = pointwise_stabilizer(g, w);
        std::vector<Mat> mats;
        for (int id : k.ids())
            mats.push_back(g.matrix(id));
        Subspace fixed = intersect(space, fixed_subspace(mats, g.ambient_dim()));
        if (!fixed.contains(w))
            report.fail("fixed space of K(W) does not contain W");
        if (!(fixed == w))
            report.fail("lattice member is not Galois closed");
        Subgroup again = pointwise_stabilizer(g, fixed);
        if (!(again == k))
            report.fail("K(V^{K(W)}) differs from K(W)");
    }
    for (const Subspace& w1 : lattice)
        for (const Subspace& w2 : lattice)
            if (w2.contains(w1)) {
                // antitone: smaller subspace, larger stabilizer
                Subgroup k1 = pointwise_stabilizer(g, w1);
                Subgroup k2 = pointwise_stabilizer(g, w2);
                if (!k1.contains(k2))
                    report.fail("pointwise stabilizer is not antitone");
            }
    return report;
}

// Nearby points have stabilizers conjugate to a subgroup of the base point's
// stabilizer. "Nearby" is realized as zeta + w/q with q large enough that no
// element outside G_zeta comes to fix the perturbed point.
inline CheckReport isotropy_shrink_check(const IsotropyPoset& p, int samples_per_type,
                                         std::uint64_t seed) {
    CheckReport report;
    for (const IsotropyType& t : p.types) {
        std::vector<Vec> zetas = stratum_points(p, t, samples_per_type, hash_combine(seed, t.class_id));
        SplitMix64 rng(hash_combine(seed, 0xC0FFEEu + t.class_id));
        for (const Vec& zeta : zetas) {
            Subgroup gz = point_stabilizer(p.group, zeta);
            Vec w(p.group.ambient_dim(), Rational(0));
            Vec coeff(p.space.dim());
            for (int i = 0; i < p.space.dim(); ++i)
                coeff[i] = Rational(rng.range(-9, 9));
            w = from_coordinates(p.space, coeff);
            Integer q = 64;
            bool good_q = false;
            for (int tries = 0; tries < 64 && !good_q; ++tries, q *= 2) {
                good_q = true;
                for (int e = 0; e < p.group.order() && good_q; ++e) {
                    if (gz.contains(e))
                        continue;
                    Vec probe = Rational(q) * zeta + w;
                    if (p.group.act(e, probe) == probe)
                        good_q = false;
                }
            }
            if (!good_q) {
                report.fail("could not separate perturbation from foreign fixed loci");
                continue;
            }
            Vec zp = zeta + Rational(1, q / 2) * w; // q was doubled once past the good value
            Subgroup stab = point_stabilizer(p.group, zp);
            if (!gz.contains(stab))
                report.fail("perturbed stabilizer escapes the base stabilizer");
            if (!conjugate_into(p.group, stab, gz))
                report.fail("perturbed stabilizer not conjugate into base stabilizer");
        }
    }
    return report;
}

// Random points only ever realize the enumerated classes, and every class is
// realized by its own stratum samples.
inline CheckReport sampling_oracle_check(const IsotropyPoset& p, int random_points,
                                         std::uint64_t seed) {
    CheckReport report;
    SplitMix64 rng(hash_combine(seed, 0xABCDu));
    for (int i = 0; i < random_points; ++i) {
        Vec coeff(p.space.dim());
        for (int j = 0; j < p.space.dim(); ++j)
            coeff[j] = rng.small_rational();
        Vec v = from_coordinates(p.space, coeff);
        Subgroup stab = point_stabilizer(p.group, v);
        if (p.type_of_class(stab) < 0)
            report.fail("random point realizes an unlisted isotropy class");
    }
    for (const IsotropyType& t : p.types)
        stratum_points(p, t, 1, hash_combine(seed, 77 + t.class_id)); // throws if unrealizable
    return report;
}

} // namespace eqc
