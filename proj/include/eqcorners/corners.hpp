#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eqcorners/errors.hpp"
#include "eqcorners/group.hpp"

namespace eqc {

enum class IncidenceMode {
    Derive,   // from hypersurface-set containment (set-determined complexes)
    Explicit, // pairs provided, closure taken
    None,     // incidence not materialized; components must be supplied
};

// Abstract face complex of a compact manifold with corners. Faces carry the
// set of boundary hypersurfaces containing them (size = codim) plus a tag
// distinguishing different components of the same hypersurface intersection.
class CornerComplex {
public:
    struct Face {
        int codim = 0;
        std::vector<int> hyps; // sorted ids
        std::string tag;
    };

    CornerComplex() = default;

    CornerComplex(std::vector<std::string> hyp_labels, std::vector<Face> faces,
                  IncidenceMode mode = IncidenceMode::Derive,
                  std::vector<std::pair<int, int>> incidence = {},
                  std::vector<int> components = {}) {
        hyp_labels_ = std::move(hyp_labels);
        faces_ = std::move(faces);
        const int nf = num_faces();
        const int nh = num_hypersurfaces();
        hyp_face_.assign(nh, -1);
        for (int f = 0; f < nf; ++f) {
            Face& face = faces_[f];
            std::sort(face.hyps.begin(), face.hyps.end());
            if (std::adjacent_find(face.hyps.begin(), face.hyps.end()) != face.hyps.end())
                throw Error("face lists a hypersurface twice (non-embedded input rejected)");
            if (static_cast<int>(face.hyps.size()) != face.codim)
                throw Error("face codim disagrees with its hypersurface count");
            for (int h : face.hyps)
                if (h < 0 || h >= nh)
                    throw Error("face references an unknown hypersurface");
            if (face.codim == 1) {
                if (hyp_face_[face.hyps[0]] != -1)
                    throw Error("hypersurface with two codim-1 faces");
                hyp_face_[face.hyps[0]] = f;
            }
        }
        for (int h = 0; h < nh; ++h)
            if (hyp_face_[h] < 0)
                throw Error("hypersurface without its codim-1 face: " + hyp_labels_[h]);

        incidence_known_ = mode != IncidenceMode::None;
        if (mode == IncidenceMode::Explicit) {
            leq_.assign(nf, std::vector<bool>(nf, false));
            for (auto [sub, sup] : incidence)
                leq_[sub][sup] = true;
            for (int f = 0; f < nf; ++f)
                leq_[f][f] = true;
            for (int k = 0; k < nf; ++k)
                for (int a = 0; a < nf; ++a)
                    if (leq_[a][k])
                        for (int b = 0; b < nf; ++b)
                            if (leq_[k][b])
                                leq_[a][b] = true;
        } else if (mode == IncidenceMode::Derive) {
            std::set<std::vector<int>> keys;
            for (const Face& f : faces_)
                if (!keys.insert(f.hyps).second)
                    throw Error("faces not determined by hypersurface sets; explicit incidence required");
            leq_.assign(nf, std::vector<bool>(nf, false));
            for (int a = 0; a < nf; ++a)
                for (int b = 0; b < nf; ++b)
                    leq_[a][b] = std::includes(faces_[a].hyps.begin(), faces_[a].hyps.end(),
                                               faces_[b].hyps.begin(), faces_[b].hyps.end());
        }

        if (incidence_known_) {
            validate();
            compute_components();
            if (!components.empty() && components != component_)
                throw Error("supplied components disagree with incidence");
        } else {
            if (static_cast<int>(components.size()) != nf)
                throw Error("components required when incidence is not materialized");
            component_ = std::move(components);
            num_components_ = component_.empty()
                                  ? 0
                                  : 1 + *std::max_element(component_.begin(), component_.end());
        }
    }

    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_hypersurfaces() const { return static_cast<int>(hyp_labels_.size()); }
    const Face& face(int f) const { return faces_[f]; }
    const std::string& hyp_label(int h) const { return hyp_labels_[h]; }
    int hyp_face(int h) const { return hyp_face_[h]; }
    int component_of(int f) const { return component_[f]; }
    int num_components() const { return num_components_; }
    bool incidence_known() const { return incidence_known_; }

    // a contained in the closure of b
    bool leq(int a, int b) const {
        if (!incidence_known_)
            throw Error("incidence was not materialized for this complex");
        return leq_[a][b];
    }

    bool hyps_intersect(int h1, int h2) const {
        for (const Face& f : faces_)
            if (std::binary_search(f.hyps.begin(), f.hyps.end(), h1) &&
                std::binary_search(f.hyps.begin(), f.hyps.end(), h2))
                return true;
        return false;
    }

    std::vector<int> faces_of_codim(int k) const {
        std::vector<int> out;
        for (int f = 0; f < num_faces(); ++f)
            if (faces_[f].codim == k)
                out.push_back(f);
        return out;
    }

    int max_codim() const {
        int m = 0;
        for (const Face& f : faces_)
            m = std::max(m, f.codim);
        return m;
    }

    std::vector<int> census_by_codim() const {
        std::vector<int> c(max_codim() + 1, 0);
        for (const Face& f : faces_)
            ++c[f.codim];
        return c;
    }

    // Sorted hypersurface counts per connected component.
    std::vector<int> hyps_per_component() const {
        std::vector<int> c(num_components_, 0);
        for (int h = 0; h < num_hypersurfaces(); ++h)
            ++c[component_[hyp_face_[h]]];
        std::sort(c.begin(), c.end());
        return c;
    }

private:
    std::vector<std::string> hyp_labels_;
    std::vector<Face> faces_;
    std::vector<int> hyp_face_;
    std::vector<std::vector<bool>> leq_;
    bool incidence_known_ = false;
    std::vector<int> component_;
    int num_components_ = 0;

    void validate() const {
        const int nf = num_faces();
        for (int a = 0; a < nf; ++a)
            for (int b = 0; b < nf; ++b) {
                if (!leq_[a][b] || a == b)
                    continue;
                if (faces_[a].codim <= faces_[b].codim)
                    throw Error("incidence not strictly graded");
                if (!std::includes(faces_[a].hyps.begin(), faces_[a].hyps.end(),
                                   faces_[b].hyps.begin(), faces_[b].hyps.end()))
                    throw Error("incidence inconsistent with hypersurface sets");
            }
        for (int f = 0; f < nf; ++f)
            for (int h : faces_[f].hyps)
                if (!leq_[f][hyp_face_[h]])
                    throw Error("face not below one of its hypersurfaces");
    }

    void compute_components() {
        const int nf = num_faces();
        std::vector<int> parent(nf);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int a = 0; a < nf; ++a)
            for (int b = 0; b < nf; ++b)
                if (leq_[a][b])
                    parent[find(a)] = find(b);
        std::map<int, int> renumber;
        component_.assign(nf, -1);
        for (int f = 0; f < nf; ++f) {
            auto [it, fresh] = renumber.try_emplace(find(f), static_cast<int>(renumber.size()));
            component_[f] = it->second;
        }
        num_components_ = static_cast<int>(renumber.size());
    }
};

// [-1,1]^n: faces are sign patterns, 0 marking a free coordinate.
inline CornerComplex box_complex(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        labels.push_back("x" + std::to_string(i + 1) + "=+1");
        labels.push_back("x" + std::to_string(i + 1) + "=-1");
    }
    std::vector<CornerComplex::Face> faces;
    std::vector<int> pattern(n, 0); // 0 free, 1 plus, 2 minus
    while (true) {
        CornerComplex::Face f;
        std::string tag;
        for (int i = 0; i < n; ++i) {
            tag += (pattern[i] == 0 ? '0' : pattern[i] == 1 ? '+' : '-');
            if (pattern[i] != 0)
                f.hyps.push_back(2 * i + (pattern[i] == 1 ? 0 : 1));
        }
        f.codim = static_cast<int>(f.hyps.size());
        f.tag = tag.empty() ? "box" : tag;
        faces.push_back(std::move(f));
        int i = 0;
        while (i < n && pattern[i] == 2)
            pattern[i++] = 0;
        if (i == n)
            break;
        ++pattern[i];
    }
    return CornerComplex(std::move(labels), std::move(faces));
}

// Closed n-ball, one boundary hypersurface (n >= 1).
inline CornerComplex ball_complex(int n) {
    std::vector<std::string> labels;
    std::vector<CornerComplex::Face> faces;
    faces.push_back({0, {}, "ball"});
    if (n >= 1) {
        labels.push_back("sphere");
        faces.push_back({1, {0}, "sphere"});
    }
    return CornerComplex(std::move(labels), std::move(faces));
}

// Finite group acting on a complex by codim- and incidence-preserving face
// permutations. The acting group is abstract (names + table); matrix groups
// act through their elements, possibly with kernel.
class LatticeAction {
public:
    LatticeAction() = default;

    static LatticeAction trivial(const CornerComplex& c) {
        LatticeAction a;
        a.names_ = {"e"};
        a.table_ = {{0}};
        a.inverse_ = {0};
        std::vector<int> id_f(c.num_faces()), id_h(c.num_hypersurfaces());
        std::iota(id_f.begin(), id_f.end(), 0);
        std::iota(id_h.begin(), id_h.end(), 0);
        a.face_perm_ = {id_f};
        a.hyp_perm_ = {id_h};
        a.validate(c);
        return a;
    }

    // Signed-permutation matrices acting on a box complex; general orthogonal
    // groups act trivially on a ball complex's two faces.
    static LatticeAction from_matrix_group(const CornerComplex& c, const MatrixGroup& g, bool box) {
        LatticeAction a;
        const int m = g.order();
        for (int i = 0; i < m; ++i)
            a.names_.push_back("g" + std::to_string(i));
        a.table_.assign(m, std::vector<int>(m));
        a.inverse_.resize(m);
        for (int i = 0; i < m; ++i) {
            a.inverse_[i] = g.inv(i);
            for (int j = 0; j < m; ++j)
                a.table_[i][j] = g.mul(i, j);
        }
        for (int e = 0; e < m; ++e) {
            if (box) {
                const Mat& mat = g.matrix(e);
                if (!mat.is_signed_permutation())
                    throw UnsupportedModel("box action requires signed permutation matrices");
                a.hyp_perm_.push_back(box_hyp_perm(mat));
            } else {
                std::vector<int> id_h(c.num_hypersurfaces());
                std::iota(id_h.begin(), id_h.end(), 0);
                a.hyp_perm_.push_back(id_h);
            }
            a.face_perm_.push_back(face_perm_from_hyps(c, a.hyp_perm_.back()));
        }
        a.validate(c);
        return a;
    }

    // Closure of hypersurface permutations (abstract input); faces must be
    // determined by their hypersurface sets.
    static LatticeAction from_hyp_generators(const CornerComplex& c,
                                             const std::vector<std::vector<int>>& gens,
                                             int cap = 4096) {
        for (const auto& gen : gens)
            if (static_cast<int>(gen.size()) != c.num_hypersurfaces())
                throw Error("hypersurface permutation has the wrong length");
        std::vector<std::vector<int>> elems;
        std::map<std::vector<int>, int> index;
        std::vector<int> id_h(c.num_hypersurfaces());
        std::iota(id_h.begin(), id_h.end(), 0);
        elems.push_back(id_h);
        index[id_h] = 0;
        for (std::size_t head = 0; head < elems.size(); ++head)
            for (const auto& gen : gens) {
                std::vector<int> prod(c.num_hypersurfaces());
                for (int h = 0; h < c.num_hypersurfaces(); ++h)
                    prod[h] = gen[elems[head][h]];
                if (index.emplace(prod, static_cast<int>(elems.size())).second) {
                    if (static_cast<int>(elems.size()) >= cap)
                        throw CapExceeded("action closure exceeds cap");
                    elems.push_back(prod);
                }
            }
        LatticeAction a;
        const int m = static_cast<int>(elems.size());
        a.table_.assign(m, std::vector<int>(m));
        for (int i = 0; i < m; ++i) {
            a.names_.push_back("g" + std::to_string(i));
            for (int j = 0; j < m; ++j) {
                std::vector<int> prod(c.num_hypersurfaces());
                for (int h = 0; h < c.num_hypersurfaces(); ++h)
                    prod[h] = elems[i][elems[j][h]];
                a.table_[i][j] = index.at(prod);
            }
        }
        a.inverse_.resize(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (a.table_[i][j] == 0)
                    a.inverse_[i] = j;
        for (int i = 0; i < m; ++i) {
            a.hyp_perm_.push_back(elems[i]);
            a.face_perm_.push_back(face_perm_from_hyps(c, elems[i]));
        }
        a.validate(c);
        return a;
    }

    int order() const { return static_cast<int>(names_.size()); }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inverse_[a]; }
    const std::string& name(int e) const { return names_[e]; }
    int face_image(int e, int f) const { return face_perm_[e][f]; }
    int hyp_image(int e, int h) const { return hyp_perm_[e][h]; }

    std::vector<std::vector<int>> hyp_orbits(int num_hyps) const {
        return orbits_of(hyp_perm_, num_hyps);
    }

    std::vector<std::vector<int>> face_orbits(int num_faces) const {
        return orbits_of(face_perm_, num_faces);
    }

    void validate(const CornerComplex& c) const {
        const int m = order();
        for (int e = 0; e < m; ++e) {
            const auto& fp = face_perm_[e];
            std::vector<bool> hit(c.num_faces(), false);
            for (int f = 0; f < c.num_faces(); ++f) {
                int g = fp[f];
                if (hit[g])
                    throw Error("action: face map is not a permutation");
                hit[g] = true;
                if (c.face(g).codim != c.face(f).codim)
                    throw Error("action: codim not preserved");
                std::vector<int> mapped;
                for (int h : c.face(f).hyps)
                    mapped.push_back(hyp_perm_[e][h]);
                std::sort(mapped.begin(), mapped.end());
                if (mapped != c.face(g).hyps)
                    throw Error("action: hypersurface sets not respected");
            }
        }
        if (c.incidence_known() && c.num_faces() <= 600) {
            for (int e = 0; e < m; ++e)
                for (int f1 = 0; f1 < c.num_faces(); ++f1)
                    for (int f2 = 0; f2 < c.num_faces(); ++f2)
                        if (c.leq(f1, f2) && !c.leq(face_perm_[e][f1], face_perm_[e][f2]))
                            throw Error("action: incidence not preserved");
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                int ij = table_[i][j];
                for (int f = 0; f < c.num_faces(); ++f)
                    if (face_perm_[ij][f] != face_perm_[i][face_perm_[j][f]])
                        throw Error("action: face maps do not respect the group table");
            }
    }

    // Internal assembly hook for derived complexes (blow-ups, doubles).
    static LatticeAction assemble(std::vector<std::string> names,
                                  std::vector<std::vector<int>> table,
                                  std::vector<std::vector<int>> face_perm,
                                  std::vector<std::vector<int>> hyp_perm, const CornerComplex& c) {
        LatticeAction a;
        a.names_ = std::move(names);
        a.table_ = std::move(table);
        a.face_perm_ = std::move(face_perm);
        a.hyp_perm_ = std::move(hyp_perm);
        const int m = a.order();
        a.inverse_.assign(m, -1);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (a.table_[i][j] == 0)
                    a.inverse_[i] = j;
        a.validate(c);
        return a;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    std::vector<std::vector<int>> face_perm_;
    std::vector<std::vector<int>> hyp_perm_;

    static std::vector<std::vector<int>> orbits_of(const std::vector<std::vector<int>>& perms,
                                                   int count) {
        std::vector<std::vector<int>> orbits;
        std::vector<bool> seen(count, false);
        for (int x = 0; x < count; ++x) {
            if (seen[x])
                continue;
            std::set<int> orbit;
            for (const auto& p : perms)
                orbit.insert(p[x]);
            bool grew = true;
            while (grew) {
                grew = false;
                for (int y : std::vector<int>(orbit.begin(), orbit.end()))
                    for (const auto& p : perms)
                        if (orbit.insert(p[y]).second)
                            grew = true;
            }
            for (int y : orbit)
                seen[y] = true;
            orbits.emplace_back(orbit.begin(), orbit.end());
        }
        return orbits;
    }

    static std::vector<int> box_hyp_perm(const Mat& m) {
        const int n = m.rows();
        std::vector<int> perm(2 * n);
        for (int i = 0; i < n; ++i) {
            int j = -1;
            Rational eps = 0;
            for (int r = 0; r < n; ++r)
                if (m(r, i) != 0) {
                    j = r;
                    eps = m(r, i);
                }
            // facet x_i = s maps to x_j = s*eps
            perm[2 * i] = 2 * j + (eps > 0 ? 0 : 1);
            perm[2 * i + 1] = 2 * j + (eps > 0 ? 1 : 0);
        }
        return perm;
    }

    static std::vector<int> face_perm_from_hyps(const CornerComplex& c, const std::vector<int>& hp) {
        std::map<std::vector<int>, int> by_hyps;
        for (int f = 0; f < c.num_faces(); ++f)
            if (!by_hyps.emplace(c.face(f).hyps, f).second)
                throw Error("action from hypersurfaces needs set-determined faces");
        std::vector<int> perm(c.num_faces());
        for (int f = 0; f < c.num_faces(); ++f) {
            std::vector<int> mapped;
            for (int h : c.face(f).hyps)
                mapped.push_back(hp[h]);
            std::sort(mapped.begin(), mapped.end());
            auto it = by_hyps.find(mapped);
            if (it == by_hyps.end())
                throw Error("action does not permute the face lattice");
            perm[f] = it->second;
        }
        return perm;
    }
};

struct BifResult {
    bool ok = false;
    std::vector<std::vector<int>> partition; // hypersurface orbits
    std::pair<int, int> witness{-1, -1};     // intersecting pair in one orbit
};

// The orbit partition is boundary intersection free iff each orbit consists
// of pairwise disjoint hypersurfaces; any valid partition is a union of
// orbits, so this is necessary and sufficient.
inline BifResult check_boundary_intersection_free(const CornerComplex& c, const LatticeAction& a) {
    BifResult result;
    result.partition = a.hyp_orbits(c.num_hypersurfaces());
    for (const auto& orbit : result.partition)
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (std::size_t j = i + 1; j < orbit.size(); ++j)
                if (c.hyps_intersect(orbit[i], orbit[j])) {
                    result.witness = {orbit[i], orbit[j]};
                    return result;
                }
    result.ok = true;
    return result;
}

struct BlowupResult {
    CornerComplex complex;
    LatticeAction action;
    std::vector<int> blown_faces; // face ids of the input complex
};

namespace detail {

// A face of an iterated boundary blow-up: the base face of the original
// complex it sits over, the nested blown centers whose front faces contain
// it (largest hyp set = deepest = blown first), and the original
// hypersurfaces whose lifts contain it.
struct FlagFace {
    int base = -1;
    std::vector<int> chain;
    std::vector<int> lifts;
};

inline bool chain_before(const CornerComplex& c, int x, int y) {
    const auto sx = c.face(x).hyps.size(), sy = c.face(y).hyps.size();
    if (sx != sy)
        return sx > sy;
    return x < y;
}

inline bool subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Existence test for a flag face with nonempty chain: every exit direction
// needs room (Z_j proper in hyp(B_j)), and no blown center outside the chain
// may capture the approach before its own blow-up time.
inline bool flag_exists(const CornerComplex& c, const FlagFace& cand, const std::vector<int>& above) {
    auto hyps_of = [&](int f) -> const std::vector<int>& { return c.face(f).hyps; };
    const auto& chain = cand.chain;
    const int r = static_cast<int>(chain.size());
    std::vector<std::vector<int>> z(r);
    for (int j = 0; j < r; ++j) {
        std::vector<int> zj;
        if (j + 1 < r)
            zj = hyps_of(chain[j + 1]);
        for (int h : cand.lifts)
            if (std::binary_search(hyps_of(chain[j]).begin(), hyps_of(chain[j]).end(), h))
                zj.push_back(h);
        std::sort(zj.begin(), zj.end());
        zj.erase(std::unique(zj.begin(), zj.end()), zj.end());
        if (subset(hyps_of(chain[j]), zj))
            return false;
        z[j] = std::move(zj);
    }
    for (int bp : above) {
        if (std::find(chain.begin(), chain.end(), bp) != chain.end())
            continue;
        bool captured = true;
        for (int j = 0; j < r; ++j) {
            if (hyps_of(chain[j]).size() <= hyps_of(bp).size())
                break; // chain[j] not blown strictly before bp
            std::vector<int> common;
            std::set_intersection(hyps_of(bp).begin(), hyps_of(bp).end(),
                                  hyps_of(chain[j]).begin(), hyps_of(chain[j]).end(),
                                  std::back_inserter(common));
            if (!subset(common, z[j])) {
                captured = false;
                break;
            }
        }
        if (captured)
            return false;
    }
    return true;
}

inline BlowupResult assemble_blowup(const CornerComplex& c, const LatticeAction& a,
                                    const std::vector<int>& blown, std::vector<FlagFace> flags) {
    std::vector<std::string> labels;
    for (int h = 0; h < c.num_hypersurfaces(); ++h)
        labels.push_back(c.hyp_label(h));
    std::map<int, int> ff_id;
    for (int b : blown) {
        ff_id[b] = static_cast<int>(labels.size());
        labels.push_back("ff(" + c.face(b).tag + ")");
    }
    std::sort(flags.begin(), flags.end(), [&](const FlagFace& x, const FlagFace& y) {
        int cx = static_cast<int>(x.chain.size() + x.lifts.size());
        int cy = static_cast<int>(y.chain.size() + y.lifts.size());
        if (cx != cy)
            return cx < cy;
        if (x.base != y.base)
            return x.base < y.base;
        if (x.chain != y.chain)
            return x.chain < y.chain;
        return x.lifts < y.lifts;
    });
    std::map<std::tuple<int, std::vector<int>, std::vector<int>>, int> index;
    std::vector<CornerComplex::Face> faces;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        const FlagFace& fl = flags[i];
        index[{fl.base, fl.chain, fl.lifts}] = static_cast<int>(i);
        CornerComplex::Face f;
        f.codim = static_cast<int>(fl.chain.size() + fl.lifts.size());
        f.hyps = fl.lifts;
        for (int b : fl.chain)
            f.hyps.push_back(ff_id.at(b));
        std::sort(f.hyps.begin(), f.hyps.end());
        f.tag = c.face(fl.base).tag;
        for (int b : fl.chain)
            f.tag += "^" + c.face(b).tag;
        faces.push_back(std::move(f));
    }
    std::vector<std::pair<int, int>> incidence;
    for (std::size_t x = 0; x < flags.size(); ++x)
        for (std::size_t y = 0; y < flags.size(); ++y) {
            if (x == y)
                continue;
            const FlagFace& fx = flags[x];
            const FlagFace& fy = flags[y];
            if (!c.leq(fx.base, fy.base))
                continue;
            auto in_chain = [&](int b) {
                return std::find(fx.chain.begin(), fx.chain.end(), b) != fx.chain.end();
            };
            if (!std::all_of(fy.chain.begin(), fy.chain.end(), in_chain))
                continue;
            if (!subset(fy.lifts, fx.lifts))
                continue;
            incidence.emplace_back(static_cast<int>(x), static_cast<int>(y));
        }

    CornerComplex out(labels, faces, IncidenceMode::Explicit, incidence);

    std::vector<std::string> names;
    std::vector<std::vector<int>> table(a.order(), std::vector<int>(a.order()));
    std::vector<std::vector<int>> face_perm, hyp_perm;
    for (int e = 0; e < a.order(); ++e) {
        names.push_back(a.name(e));
        for (int j = 0; j < a.order(); ++j)
            table[e][j] = a.mul(e, j);
        std::vector<int> hp(out.num_hypersurfaces());
        for (int h = 0; h < c.num_hypersurfaces(); ++h)
            hp[h] = a.hyp_image(e, h);
        for (int b : blown)
            hp[ff_id.at(b)] = ff_id.at(a.face_image(e, b));
        hyp_perm.push_back(std::move(hp));
        std::vector<int> fp(flags.size());
        for (std::size_t i = 0; i < flags.size(); ++i) {
            const FlagFace& fl = flags[i];
            std::vector<int> chain2, lifts2;
            for (int b : fl.chain)
                chain2.push_back(a.face_image(e, b));
            for (int h : fl.lifts)
                lifts2.push_back(a.hyp_image(e, h));
            std::sort(chain2.begin(), chain2.end(),
                      [&](int x, int y) { return chain_before(c, x, y); });
            std::sort(lifts2.begin(), lifts2.end());
            fp[i] = index.at({a.face_image(e, fl.base), chain2, lifts2});
        }
        face_perm.push_back(std::move(fp));
    }
    LatticeAction lifted = LatticeAction::assemble(std::move(names), std::move(table),
                                                   std::move(face_perm), std::move(hyp_perm), out);
    return {std::move(out), std::move(lifted), blown};
}

// Blow up a set of boundary faces (codim >= 2) in order of increasing
// dimension. `blown` must be action invariant and closed under components of
// intersections of its members.
inline BlowupResult blow_up_boundary_faces(const CornerComplex& c, const LatticeAction& a,
                                           std::vector<int> blown) {
    std::sort(blown.begin(), blown.end());
    blown.erase(std::unique(blown.begin(), blown.end()), blown.end());
    for (int b : blown)
        if (c.face(b).codim < 2)
            throw Error("blow_up_boundary_faces: centers must have codim >= 2");

    std::vector<FlagFace> flags;
    for (int f = 0; f < c.num_faces(); ++f) {
        const auto& fh = c.face(f).hyps;
        std::vector<int> above;
        for (int b : blown)
            if (c.leq(f, b))
                above.push_back(b);
        std::sort(above.begin(), above.end(), [&](int x, int y) { return chain_before(c, x, y); });

        const int nd = static_cast<int>(fh.size());
        for (unsigned mask = 0; mask < (1u << nd); ++mask) {
            std::vector<int> lifts;
            for (int i = 0; i < nd; ++i)
                if (mask & (1u << i))
                    lifts.push_back(fh[i]);
            if (static_cast<int>(lifts.size()) == nd && above.empty())
                flags.push_back({f, {}, lifts});

            std::vector<int> chain;
            auto extend = [&](auto&& self, int last_idx) -> void {
                if (!chain.empty()) {
                    FlagFace cand{f, chain, lifts};
                    if (flag_exists(c, cand, above))
                        flags.push_back(std::move(cand));
                }
                for (int idx = last_idx + 1; idx < static_cast<int>(above.size()); ++idx) {
                    int b = above[idx];
                    if (chain.empty()) {
                        std::vector<int> u = c.face(b).hyps;
                        u.insert(u.end(), lifts.begin(), lifts.end());
                        std::sort(u.begin(), u.end());
                        u.erase(std::unique(u.begin(), u.end()), u.end());
                        if (u != fh)
                            continue;
                    } else {
                        if (c.face(b).hyps.size() >= c.face(chain.back()).hyps.size())
                            continue;
                        if (!subset(c.face(b).hyps, c.face(chain.back()).hyps))
                            continue;
                        if (!c.leq(chain.back(), b))
                            continue;
                    }
                    chain.push_back(b);
                    self(self, idx);
                    chain.pop_back();
                }
            };
            extend(extend, -1);
        }
    }
    return assemble_blowup(c, a, blown, std::move(flags));
}

} // namespace detail

// Blow up all proper boundary faces in order of increasing dimension. The
// new hypersurfaces correspond to the proper faces of the input; corners of
// codim k to k-chains of its face poset.
inline BlowupResult total_boundary_blowup(const CornerComplex& c, const LatticeAction& a) {
    std::vector<int> blown;
    for (int f = 0; f < c.num_faces(); ++f)
        if (c.face(f).codim >= 2)
            blown.push_back(f);
    return detail::blow_up_boundary_faces(c, a, std::move(blown));
}

// Blow up exactly the faces that are components of intersections of
// hypersurfaces intertwined by the action (all in one orbit); the result is
// boundary intersection free.
inline BlowupResult partial_boundary_blowup(const CornerComplex& c, const LatticeAction& a) {
    auto orbits = a.hyp_orbits(c.num_hypersurfaces());
    std::vector<int> orbit_of(c.num_hypersurfaces());
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for (int h : orbits[i])
            orbit_of[h] = static_cast<int>(i);
    std::vector<int> blown;
    auto intertwined = [&](const std::vector<int>& hyps) {
        for (int h : hyps)
            if (orbit_of[h] != orbit_of[hyps[0]])
                return false;
        return true;
    };
    for (int f = 0; f < c.num_faces(); ++f)
        if (c.face(f).codim >= 2 && intertwined(c.face(f).hyps))
            blown.push_back(f);
    for (int b : blown)
        for (int f = 0; f < c.num_faces(); ++f)
            if (b != f && c.leq(b, f) && c.face(f).codim >= 2 && !intertwined(c.face(f).hyps))
                throw Error("partial blow-up: intertwined collection violates the chain condition");
    return detail::blow_up_boundary_faces(c, a, std::move(blown));
}

struct DoubleResult {
    CornerComplex complex;
    LatticeAction action; // original group extended by the swap involution
};

// Glue two copies of the complex along a disjoint invariant collection of
// hypersurfaces. Faces inside the collection become interior and disappear;
// faces meeting it are doubled; everything else appears twice.
inline DoubleResult double_across(const CornerComplex& c, const LatticeAction& a,
                                  const std::vector<int>& collection) {
    for (std::size_t i = 0; i < collection.size(); ++i)
        for (std::size_t j = i + 1; j < collection.size(); ++j)
            if (c.hyps_intersect(collection[i], collection[j]))
                throw CollectionNotDisjoint("double_across: collection hypersurfaces intersect");
    std::set<int> coll(collection.begin(), collection.end());
    for (int e = 0; e < a.order(); ++e)
        for (int h : collection)
            if (!coll.count(a.hyp_image(e, h)))
                throw CollectionNotInvariant("double_across: collection is not invariant");

    auto in_collection_closure = [&](int f) {
        for (int h : coll)
            if (c.leq(f, c.hyp_face(h)))
                return true;
        return false;
    };
    auto meets_collection = [&](int f) {
        for (int g = 0; g < c.num_faces(); ++g)
            if (c.leq(g, f) && in_collection_closure(g))
                return true;
        return false;
    };

    // fate: -1 dropped (inside the collection), 0 glued double, 1 two copies
    std::vector<int> fate(c.num_faces());
    for (int f = 0; f < c.num_faces(); ++f)
        fate[f] = in_collection_closure(f) ? -1 : (meets_collection(f) ? 0 : 1);
    std::vector<int> hyp_fate(c.num_hypersurfaces());
    for (int h = 0; h < c.num_hypersurfaces(); ++h)
        hyp_fate[h] = fate[c.hyp_face(h)];

    std::vector<std::string> labels;
    std::map<std::pair<int, int>, int> hyp_id; // (old hyp, side: 0 glued / +1 / -1)
    for (int h = 0; h < c.num_hypersurfaces(); ++h) {
        if (hyp_fate[h] == -1)
            continue;
        if (hyp_fate[h] == 0) {
            hyp_id[{h, 0}] = static_cast<int>(labels.size());
            labels.push_back("2(" + c.hyp_label(h) + ")");
        } else {
            hyp_id[{h, 1}] = static_cast<int>(labels.size());
            labels.push_back(c.hyp_label(h) + "+");
            hyp_id[{h, -1}] = static_cast<int>(labels.size());
            labels.push_back(c.hyp_label(h) + "-");
        }
    }

    std::map<std::pair<int, int>, int> face_id;
    std::vector<CornerComplex::Face> faces;
    auto emit_face = [&](int f, int side) {
        CornerComplex::Face nf;
        nf.codim = c.face(f).codim;
        for (int h : c.face(f).hyps)
            nf.hyps.push_back(hyp_fate[h] == 0 ? hyp_id.at({h, 0}) : hyp_id.at({h, side}));
        std::sort(nf.hyps.begin(), nf.hyps.end());
        nf.tag = c.face(f).tag + (side == 0 ? "~2" : side > 0 ? "~+" : "~-");
        face_id[{f, side}] = static_cast<int>(faces.size());
        faces.push_back(std::move(nf));
    };
    for (int f = 0; f < c.num_faces(); ++f) {
        if (fate[f] == -1)
            continue;
        if (fate[f] == 0)
            emit_face(f, 0);
        else {
            emit_face(f, 1);
            emit_face(f, -1);
        }
    }

    std::vector<std::pair<int, int>> incidence;
    for (auto& [key1, id1] : face_id)
        for (auto& [key2, id2] : face_id) {
            if (id1 == id2)
                continue;
            auto [f1, s1] = key1;
            auto [f2, s2] = key2;
            if (!c.leq(f1, f2))
                continue;
            if (s1 == s2 || s2 == 0 || s1 == 0)
                incidence.emplace_back(id1, id2);
        }
    CornerComplex out(labels, faces, IncidenceMode::Explicit, incidence);

    const int m = a.order();
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(2 * m, std::vector<int>(2 * m));
    auto pack = [m](int g, int eps) { return eps * m + g; };
    for (int eps = 0; eps < 2; ++eps)
        for (int g = 0; g < m; ++g)
            names.push_back(a.name(g) + (eps ? "*swap" : ""));
    for (int e1 = 0; e1 < 2; ++e1)
        for (int g1 = 0; g1 < m; ++g1)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int g2 = 0; g2 < m; ++g2)
                    table[pack(g1, e1)][pack(g2, e2)] = pack(a.mul(g1, g2), e1 ^ e2);
    std::vector<std::vector<int>> face_perm(2 * m, std::vector<int>(faces.size()));
    std::vector<std::vector<int>> hyp_perm(2 * m, std::vector<int>(labels.size()));
    for (int eps = 0; eps < 2; ++eps)
        for (int g = 0; g < m; ++g) {
            int e = pack(g, eps);
            for (auto& [key, id] : face_id) {
                auto [f, s] = key;
                face_perm[e][id] = face_id.at({a.face_image(g, f), eps ? -s : s});
            }
            for (auto& [key, id] : hyp_id) {
                auto [h, s] = key;
                hyp_perm[e][id] = hyp_id.at({a.hyp_image(g, h), eps ? -s : s});
            }
        }
    LatticeAction ext = LatticeAction::assemble(std::move(names), std::move(table),
                                                std::move(face_perm), std::move(hyp_perm), out);
    return {std::move(out), std::move(ext)};
}

// Product complex: hypersurfaces are hyp x component and component x hyp;
// faces are pairs with added codims.
inline CornerComplex product_complex(const CornerComplex& a, const CornerComplex& b) {
    std::vector<std::string> labels;
    std::map<std::tuple<int, int, int>, int> hyp_id; // (side, hyp, other component)
    for (int h = 0; h < a.num_hypersurfaces(); ++h)
        for (int cb = 0; cb < b.num_components(); ++cb) {
            hyp_id[{0, h, cb}] = static_cast<int>(labels.size());
            labels.push_back(a.hyp_label(h) + "x[" + std::to_string(cb) + "]");
        }
    for (int h = 0; h < b.num_hypersurfaces(); ++h)
        for (int ca = 0; ca < a.num_components(); ++ca) {
            hyp_id[{1, h, ca}] = static_cast<int>(labels.size());
            labels.push_back("[" + std::to_string(ca) + "]x" + b.hyp_label(h));
        }
    std::vector<CornerComplex::Face> faces;
    std::map<std::pair<int, int>, int> face_id;
    for (int f1 = 0; f1 < a.num_faces(); ++f1)
        for (int f2 = 0; f2 < b.num_faces(); ++f2) {
            CornerComplex::Face f;
            f.codim = a.face(f1).codim + b.face(f2).codim;
            for (int h : a.face(f1).hyps)
                f.hyps.push_back(hyp_id.at({0, h, b.component_of(f2)}));
            for (int h : b.face(f2).hyps)
                f.hyps.push_back(hyp_id.at({1, h, a.component_of(f1)}));
            std::sort(f.hyps.begin(), f.hyps.end());
            f.tag = a.face(f1).tag + "|" + b.face(f2).tag;
            face_id[{f1, f2}] = static_cast<int>(faces.size());
            faces.push_back(std::move(f));
        }
    std::vector<std::pair<int, int>> incidence;
    for (auto& [k1, id1] : face_id)
        for (auto& [k2, id2] : face_id)
            if (id1 != id2 && a.leq(k1.first, k2.first) && b.leq(k1.second, k2.second))
                incidence.emplace_back(id1, id2);
    return CornerComplex(std::move(labels), std::move(faces), IncidenceMode::Explicit, incidence);
}

} // namespace eqc
