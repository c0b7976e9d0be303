#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eqcorners/corners.hpp"
#include "eqcorners/feasibility.hpp"
#include "eqcorners/model.hpp"
#include "eqcorners/strata.hpp"

namespace eqc {

struct ResolveOptions {
    int cap = 1024;
    int samples_per_face = 5;
    std::uint64_t seed = 0;
    bool truncate_last_step = false; // test fixture: skip the final trace step
    int incidence_threshold = 400;   // materialize complex incidence below this face count
    bool build_structure = true;
};

struct TraceStep {
    int round = 0;
    int class_id = -1;
    std::vector<int> center_members;
    int center_codim = 0;
    std::vector<int> removed_classes;
    std::vector<int> remaining_classes; // non-principal classes still present
};

// Index of a face of the resolved complex: the nested chain of blown centers
// whose front faces contain it, the original-boundary marker, and one sign
// vector per level pinning the connected component.
struct FlagIndex {
    std::vector<int> chain;                    // member ids, decreasing dimension
    bool at_infinity = false;                  // ball models
    std::vector<std::pair<int, int>> box_face; // (ambient coordinate, +-1), sign-box models
    std::vector<std::vector<int>> level_signs; // [0]: base level, [j]: exit level of chain[j-1]
};

struct ResolvedFace {
    FlagIndex index;
    Vec base_point;              // a direction vector when at infinity
    std::vector<Vec> directions; // u_j in W_{j-1} meet W_j-perp, j = 1..k
    int codim = 0;
    int component = -1;
    std::vector<int> hyps;
    int carrier_member = -1; // blow-down bookkeeping: beta maps into this member
};

// One acting-group orbit of lattice members together with its stabilizer
// data within the reference group.
struct IsotropyClass {
    int id = -1;
    std::vector<int> members;
    int rep_member = -1;
    Subgroup rep_group;
    int codim = 0;
    int group_order = 0;
};

struct LevelSpec {
    Subspace space;
    std::vector<Subspace> avoid;       // proper traces of all members (genericity)
    std::vector<Subspace> sign_traces; // codim-1 traces of blown members
    std::vector<Vec> sign_normals;     // canonical normal within the level space
};

class ResolutionOutcome;

struct FibrationDescriptor {
    int class_id = -1;
    std::vector<int> hyp_faces; // codim-1 faces forming the collective
    int fibration_codim = 0;    // fiber dimension: codim of the center minus one
    int induction_copies = 1;   // |acting| / |stabilizer of the representative piece|
    std::shared_ptr<const ResolutionOutcome> base;
    std::shared_ptr<const ResolutionOutcome> fiber; // null when the fiber recursion closes on the model itself
    bool fiber_is_self = false;
    std::map<int, int> projection; // face id -> base face id, on the closed collective
};

// The canonical resolution of a compactified linear model: lattice classes,
// blow-up trace, the resolved face complex with its action, and the
// equivariant resolution structure with recursive bases and fibers.
class ResolutionOutcome {
public:
    ModelKind kind = ModelKind::Ball;
    Subspace space;
    MatrixGroup ref;  // reference group carrying the stratification
    Subgroup acting;  // subgroup acting on this piece
    Subgroup kernel;  // acting elements fixing the space pointwise
    std::string name;
    bool is_top = false;

    std::vector<Subspace> members;
    std::vector<Subgroup> member_groups;
    std::vector<IsotropyClass> classes;
    int principal_class = -1;
    std::vector<std::vector<bool>> class_leq; // geometric order: below = larger groups
    std::vector<TraceStep> trace;
    std::vector<int> blown;
    std::vector<ResolvedFace> faces;
    CornerComplex complex;
    LatticeAction action;
    std::map<int, FibrationDescriptor> collectives;
    std::vector<int> carrier_hyp_faces; // original-boundary hypersurfaces (unfibered carriers)
    IsotropyPoset public_poset;         // strata-module view (top models)

    int dim() const { return space.dim(); }

    int member_id(const Subspace& w) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] == w)
                return static_cast<int>(i);
        return -1;
    }

    int class_of_member(int m) const {
        for (const IsotropyClass& c : classes)
            for (int x : c.members)
                if (x == m)
                    return c.id;
        throw Error("class_of_member: not a lattice member");
    }

    bool member_blown(int m) const { return blown_flags_[m]; }

    int face_id(const std::string& key) const {
        auto it = face_lookup_.find(key);
        if (it == face_lookup_.end())
            throw Error("face key not found: " + key);
        return it->second;
    }

    std::string face_label(int f) const {
        const ResolvedFace& rf = faces[f];
        std::ostringstream os;
        os << "face" << f << "{";
        os << "chain=[";
        for (std::size_t i = 0; i < rf.index.chain.size(); ++i)
            os << (i ? "," : "") << "W" << rf.index.chain[i];
        os << "]";
        if (rf.index.at_infinity)
            os << ",inf";
        for (auto [coord, s] : rf.index.box_face)
            os << ",x" << coord + 1 << "=" << (s > 0 ? "+1" : "-1");
        os << "}";
        return os.str();
    }

    // ---- face identity machinery -------------------------------------

    static std::string face_key(const FlagIndex& ix) {
        std::ostringstream os;
        os << "c:";
        for (int m : ix.chain)
            os << m << ",";
        os << "|i:" << (ix.at_infinity ? 1 : 0) << "|b:";
        for (auto [c, s] : ix.box_face)
            os << c << (s > 0 ? "+" : "-") << ",";
        os << "|s:";
        for (const auto& lv : ix.level_signs) {
            for (int s : lv)
                os << (s > 0 ? "+" : "-");
            os << ";";
        }
        return os.str();
    }

    // Lex tuple of a face: base point first, then exit directions from the
    // deepest chain member outward.
    static std::vector<Vec> lex_tuple(const ResolvedFace& f) {
        std::vector<Vec> t;
        t.push_back(f.base_point);
        for (auto it = f.directions.rbegin(); it != f.directions.rend(); ++it)
            t.push_back(*it);
        return t;
    }

    static int lex_sign(const std::vector<Vec>& tuple, const Vec& normal) {
        for (const Vec& v : tuple) {
            int s = sign(dot(v, normal));
            if (s != 0)
                return s;
        }
        throw Error("lex_sign: degenerate query");
    }

    const LevelSpec& x_level(const std::vector<int>& chain, bool at_inf) const {
        return level_bundle(chain).x[at_inf ? 1 : 0];
    }

    const std::vector<LevelSpec>& u_levels(const std::vector<int>& chain) const {
        return level_bundle(chain).u;
    }

    // Signs a lex tuple realizes for the given flag shape.
    FlagIndex classify(std::vector<int> chain, bool at_inf,
                       std::vector<std::pair<int, int>> box_face,
                       const std::vector<Vec>& tuple) const {
        FlagIndex ix;
        ix.chain = std::move(chain);
        ix.at_infinity = at_inf;
        ix.box_face = std::move(box_face);
        const LevelSpec& xl = x_level(ix.chain, at_inf);
        ix.level_signs.emplace_back();
        for (const Vec& nu : xl.sign_normals)
            ix.level_signs.back().push_back(lex_sign(tuple, nu));
        for (const LevelSpec& lv : u_levels(ix.chain)) {
            ix.level_signs.emplace_back();
            for (const Vec& nu : lv.sign_normals)
                ix.level_signs.back().push_back(lex_sign(tuple, nu));
        }
        return ix;
    }

    // The acting-group image of a face.
    int act_on_face(int g, int f) const {
        const ResolvedFace& rf = faces[f];
        std::vector<int> chain;
        for (int m : rf.index.chain)
            chain.push_back(member_image_[g][m]);
        std::sort(chain.begin(), chain.end(),
                  [&](int a, int b) { return members[a].dim() > members[b].dim(); });
        std::vector<std::pair<int, int>> box = rf.index.box_face;
        for (auto& [coord, s] : box)
            if (ref.matrix(g)(coord, coord) < 0)
                s = -s;
        std::sort(box.begin(), box.end());
        std::vector<Vec> tuple;
        tuple.push_back(ref.act(g, rf.base_point));
        for (auto it = rf.directions.rbegin(); it != rf.directions.rend(); ++it)
            tuple.push_back(ref.act(g, *it));
        FlagIndex ix = classify(std::move(chain), rf.index.at_infinity, std::move(box), tuple);
        return face_id(face_key(ix));
    }

    // Whether `sub` lies in the closure of `sup`.
    bool face_below(int sub, int sup) const {
        const ResolvedFace& a = faces[sub];
        const ResolvedFace& b = faces[sup];
        for (int m : b.index.chain)
            if (std::find(a.index.chain.begin(), a.index.chain.end(), m) == a.index.chain.end())
                return false;
        for (auto mk : b.index.box_face)
            if (std::find(a.index.box_face.begin(), a.index.box_face.end(), mk) ==
                a.index.box_face.end())
                return false;
        if (b.index.at_infinity && !a.index.at_infinity)
            return false;
        std::vector<Vec> tuple = lex_tuple(a);
        const LevelSpec& xl = x_level(b.index.chain, b.index.at_infinity);
        for (std::size_t q = 0; q < xl.sign_normals.size(); ++q)
            if (lex_sign(tuple, xl.sign_normals[q]) != b.index.level_signs[0][q])
                return false;
        const auto& uls = u_levels(b.index.chain);
        for (std::size_t j = 0; j < uls.size(); ++j)
            for (std::size_t q = 0; q < uls[j].sign_normals.size(); ++q)
                if (lex_sign(tuple, uls[j].sign_normals[q]) != b.index.level_signs[j + 1][q])
                    return false;
        return true;
    }

    // Fresh generic samples of a face, deterministic in the seed: the flag
    // signs are preserved while every proper member trace is avoided.
    std::pair<Vec, std::vector<Vec>> fresh_sample(int f, std::uint64_t seed) const;

    // Forget the structure above the representative center of `class_id`;
    // returns the face id within the base outcome. `f` must lie in the
    // closed collective of the class.
    int project_to_base(int class_id, int f) const;

    friend ResolutionOutcome canonical_resolution(const GeometricModel& model,
                                                  const ResolveOptions& options);

    struct Builder;

    // internal caches, filled by the builder
    std::map<std::string, int> face_lookup_;
    std::vector<std::vector<int>> member_image_; // per ref element: member id map
    std::vector<bool> blown_flags_;
    std::vector<int> acting_index_; // ref id -> contiguous acting position (-1 outside)

    struct LevelBundle {
        LevelSpec x[2]; // interior / at infinity
        std::vector<LevelSpec> u;
    };
    mutable std::map<std::vector<int>, LevelBundle> level_cache_;
    const LevelBundle& level_bundle(const std::vector<int>& chain) const;
    LevelSpec make_x_level(const std::vector<int>& chain, bool at_inf) const;
    LevelSpec make_u_level(const std::vector<int>& chain, int j) const;
};

namespace detail {

inline MatrixGroup subgroup_as_group(const Subgroup& s, const std::string& name = "") {
    const MatrixGroup& p = s.parent();
    std::map<int, int> pos;
    for (std::size_t i = 0; i < s.ids().size(); ++i)
        pos[s.ids()[i]] = static_cast<int>(i);
    std::vector<Mat> elems;
    for (int id : s.ids())
        elems.push_back(p.matrix(id));
    std::vector<std::vector<int>> table(s.order(), std::vector<int>(s.order()));
    for (int i = 0; i < s.order(); ++i)
        for (int j = 0; j < s.order(); ++j)
            table[i][j] = pos.at(p.mul(s.ids()[i], s.ids()[j]));
    return MatrixGroup::from_table(elems, table, name);
}

// Canonical generator of a one-dimensional subspace.
inline Vec line_generator(const Subspace& line) {
    if (line.dim() != 1)
        throw Error("line_generator: not one-dimensional");
    return line.basis()[0];
}

} // namespace detail

inline const ResolutionOutcome::LevelBundle&
ResolutionOutcome::level_bundle(const std::vector<int>& chain) const {
    auto it = level_cache_.find(chain);
    if (it != level_cache_.end())
        return it->second;
    LevelBundle b;
    b.x[0] = make_x_level(chain, false);
    b.x[1] = make_x_level(chain, true);
    for (int j = 1; j <= static_cast<int>(chain.size()); ++j)
        b.u.push_back(make_u_level(chain, j));
    return level_cache_.emplace(chain, std::move(b)).first->second;
}

inline LevelSpec ResolutionOutcome::make_x_level(const std::vector<int>& chain, bool at_inf) const {
    LevelSpec lv;
    lv.space = chain.empty() ? space : members[chain.back()];
    std::set<Subspace> sign_traces;
    std::set<Subspace> avoid;
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Subspace& y = members[m];
        if (y.contains(lv.space))
            continue;
        Subspace t = intersect(y, lv.space);
        avoid.insert(t);
        if (blown_flags_[m] && t.dim() == lv.space.dim() - 1)
            sign_traces.insert(t);
    }
    if (at_inf && lv.space.dim() == 1)
        sign_traces.insert(Subspace::zero(space.ambient()));
    lv.avoid.assign(avoid.begin(), avoid.end());
    for (const Subspace& t : sign_traces) {
        lv.sign_traces.push_back(t);
        lv.sign_normals.push_back(detail::line_generator(intersect(lv.space, orthogonal_complement(t))));
    }
    return lv;
}

inline LevelSpec ResolutionOutcome::make_u_level(const std::vector<int>& chain, int j) const {
    LevelSpec lv;
    const Subspace& wj = members[chain[j - 1]];
    const Subspace& prev = j == 1 ? space : members[chain[j - 2]];
    lv.space = intersect(prev, orthogonal_complement(wj));
    std::set<Subspace> sign_traces;
    std::set<Subspace> avoid;
    for (std::size_t m = 0; m < members.size(); ++m) {
        const Subspace& y = members[m];
        if (!y.contains(wj) || y.contains(prev))
            continue;
        Subspace t = intersect(y, lv.space);
        if (t == lv.space)
            continue;
        avoid.insert(t);
        if (blown_flags_[m] && t.dim() == lv.space.dim() - 1)
            sign_traces.insert(t);
    }
    lv.avoid.assign(avoid.begin(), avoid.end());
    for (const Subspace& t : sign_traces) {
        lv.sign_traces.push_back(t);
        lv.sign_normals.push_back(detail::line_generator(intersect(lv.space, orthogonal_complement(t))));
    }
    return lv;
}

} // namespace eqc

#include "eqcorners/resolve_build.hpp"
#include "eqcorners/resolve_verify.hpp"
