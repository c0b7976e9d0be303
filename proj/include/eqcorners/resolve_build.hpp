#pragma once

// Construction of ResolutionOutcome: class enumeration, the blow-up trace,
// face enumeration with exact samples, the resolved complex with its action,
// and the recursive resolution structure. Included from resolve.hpp.

namespace eqc {
namespace detail {

// Affine realization of one level: t |-> origin + sum t_a dirs[a].
struct LevelFrame {
    Vec origin;
    std::vector<Vec> dirs;
    std::vector<int> bounded; // t indices with |t_a| < 1 (sign-box free coordinates)
    bool need_nonzero = false;

    Vec realize(const Vec& t) const {
        Vec x = origin;
        for (std::size_t a = 0; a < dirs.size(); ++a)
            if (t[a] != 0)
                x = x + t[a] * dirs[a];
        return x;
    }
};

inline bool sample_valid(const LevelFrame& frame, const LevelSpec& level,
                         const std::vector<int>& signs, const Vec& t) {
    for (int a : frame.bounded)
        if (!(abs(t[a]) < 1))
            return false;
    Vec x = frame.realize(t);
    for (std::size_t q = 0; q < level.sign_normals.size(); ++q)
        if (sign(dot(x, level.sign_normals[q])) != signs[q])
            return false;
    for (const Subspace& tr : level.avoid)
        if (tr.contains_vector(x))
            return false;
    if (frame.need_nonzero && is_zero(x))
        return false;
    return true;
}

// Perturb a region sample into a fully generic one: same strict signs, off
// every proper member trace.
inline Vec refine_sample(const LevelFrame& frame, const LevelSpec& level,
                         const std::vector<int>& signs, Vec t, SplitMix64& rng) {
    if (sample_valid(frame, level, signs, t))
        return frame.realize(t);
    for (int attempt = 1; attempt <= 80; ++attempt) {
        Vec cand = t;
        Rational eps(1, Integer(1) << std::min(attempt + 1, 48));
        for (std::size_t a = 0; a < cand.size(); ++a)
            cand[a] += eps * rng.small_rational();
        if (sample_valid(frame, level, signs, cand))
            return frame.realize(cand);
    }
    throw FaceEmpty("refine_sample: no generic rational sample respects the signs");
}

struct PieceSpec {
    ModelKind kind = ModelKind::Ball;
    Subspace space;
    MatrixGroup ref;
    Subgroup acting;
    std::vector<Subspace> members;
    std::vector<Subgroup> member_groups;
    std::string name;
    bool is_top = false;
};

inline std::string subspace_token(const Subspace& s) {
    std::ostringstream os;
    os << s.dim() << ":";
    for (const Vec& row : s.basis())
        for (const Rational& x : row)
            os << format_rational(x) << ",";
    return os.str();
}

inline std::string piece_key(const PieceSpec& spec) {
    std::ostringstream os;
    os << to_string(spec.kind) << "#" << subspace_token(spec.space) << "#a:";
    for (int id : spec.acting.ids())
        os << id << ",";
    os << "#m:";
    for (const Subspace& w : spec.members)
        os << subspace_token(w) << ";";
    return os.str();
}

using PieceCache = std::map<std::string, std::shared_ptr<const ResolutionOutcome>>;

std::shared_ptr<const ResolutionOutcome> build_outcome(const PieceSpec& spec,
                                                       const ResolveOptions& options,
                                                       PieceCache& cache);

// --- class and trace computation -------------------------------------------

inline void compute_classes(ResolutionOutcome& out) {
    const int nm = static_cast<int>(out.members.size());
    // orbit of each member under the acting subgroup
    std::vector<bool> seen(nm, false);
    std::vector<IsotropyClass> classes;
    for (int m = 0; m < nm; ++m) {
        if (seen[m])
            continue;
        std::set<int> orbit;
        for (int a : out.acting.ids())
            orbit.insert(out.member_image_[a][m]);
        IsotropyClass c;
        c.members.assign(orbit.begin(), orbit.end());
        c.rep_member = c.members.front();
        for (int x : c.members)
            seen[x] = true;
        c.rep_group = out.member_groups[c.rep_member];
        c.codim = out.space.dim() - out.members[c.rep_member].dim();
        c.group_order = c.rep_group.order();
        classes.push_back(std::move(c));
    }
    std::sort(classes.begin(), classes.end(), [&](const IsotropyClass& a, const IsotropyClass& b) {
        if (a.group_order != b.group_order)
            return a.group_order > b.group_order;
        return out.members[a.rep_member] < out.members[b.rep_member];
    });
    for (std::size_t i = 0; i < classes.size(); ++i)
        classes[i].id = static_cast<int>(i);
    out.classes = std::move(classes);

    const int nc = static_cast<int>(out.classes.size());
    out.class_leq.assign(nc, std::vector<bool>(nc, false));
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b) {
            bool below = false; // a <= b: some member of a inside some member of b
            for (int wa : out.classes[a].members)
                for (int wb : out.classes[b].members)
                    if (out.members[wb].contains(out.members[wa]))
                        below = true;
            out.class_leq[a][b] = below;
        }
    out.principal_class = -1;
    for (const IsotropyClass& c : out.classes)
        if (out.members[c.rep_member] == out.space)
            out.principal_class = c.id;
    if (out.principal_class < 0)
        throw Error("resolution: principal class not found");
}

inline void compute_trace(ResolutionOutcome& out, const ResolveOptions& options) {
    std::set<int> remaining;
    for (const IsotropyClass& c : out.classes)
        if (c.id != out.principal_class)
            remaining.insert(c.id);
    int round = 0;
    while (!remaining.empty()) {
        ++round;
        std::vector<int> minimal;
        for (int c : remaining) {
            bool is_min = true;
            for (int other : remaining)
                if (other != c && out.class_leq[other][c])
                    is_min = false;
            if (is_min)
                minimal.push_back(c);
        }
        std::sort(minimal.begin(), minimal.end());
        for (int c : minimal) {
            TraceStep step;
            step.round = round;
            step.class_id = c;
            step.center_members = out.classes[c].members;
            step.center_codim = out.classes[c].codim;
            step.removed_classes = {c};
            remaining.erase(c);
            step.remaining_classes.assign(remaining.begin(), remaining.end());
            // classes blown later in the same round are still listed; fix below
            out.trace.push_back(std::move(step));
        }
    }
    if (options.truncate_last_step && !out.trace.empty())
        out.trace.pop_back();
    out.blown_flags_.assign(out.members.size(), false);
    for (const TraceStep& s : out.trace)
        for (int m : s.center_members) {
            out.blown.push_back(m);
            out.blown_flags_[m] = true;
        }
}

// --- face enumeration -------------------------------------------------------

inline LevelFrame x_frame(const ResolutionOutcome& out, const Subspace& carrier, bool at_inf,
                          const std::vector<std::pair<int, int>>& box_face) {
    LevelFrame fr;
    fr.origin = Vec(out.space.ambient(), Rational(0));
    if (out.kind == ModelKind::SignBox) {
        std::vector<int> coords = GeometricModel::box_coordinates(carrier);
        std::set<int> marked;
        for (auto [c, s] : box_face) {
            marked.insert(c);
            fr.origin[c] = s;
        }
        for (int c : coords)
            if (!marked.count(c)) {
                Vec e(out.space.ambient(), Rational(0));
                e[c] = 1;
                fr.bounded.push_back(static_cast<int>(fr.dirs.size()));
                fr.dirs.push_back(std::move(e));
            }
    } else {
        fr.dirs = carrier.basis();
        fr.need_nonzero = at_inf;
    }
    return fr;
}

inline LevelFrame u_frame(const LevelSpec& level) {
    LevelFrame fr;
    fr.origin = Vec(level.space.ambient(), Rational(0));
    fr.dirs = level.space.basis();
    fr.need_nonzero = true;
    return fr;
}

inline std::vector<Vec> frame_queries(const LevelFrame& fr, const LevelSpec& level) {
    std::vector<Vec> rows;
    for (const Vec& nu : level.sign_normals) {
        Vec row;
        for (const Vec& d : fr.dirs)
            row.push_back(dot(d, nu));
        row.push_back(dot(fr.origin, nu));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline StrictSystem frame_base_system(const LevelFrame& fr) {
    StrictSystem sys(static_cast<int>(fr.dirs.size()));
    for (int a : fr.bounded) {
        Vec row(fr.dirs.size(), Rational(0));
        row[a] = 1;
        sys.add(row, Rational(1)); // t_a > -1
        row[a] = -1;
        sys.add(row, Rational(1)); // t_a < 1
    }
    return sys;
}

inline void enumerate_faces(ResolutionOutcome& out, const ResolveOptions& options) {
    // nested chains of blown members, decreasing dimension
    std::vector<int> blown_sorted = out.blown;
    std::sort(blown_sorted.begin(), blown_sorted.end(), [&](int a, int b) {
        if (out.members[a].dim() != out.members[b].dim())
            return out.members[a].dim() > out.members[b].dim();
        return a < b;
    });
    std::vector<std::vector<int>> chains;
    std::vector<int> chain;
    auto extend = [&](auto&& self, std::size_t from) -> void {
        chains.push_back(chain);
        for (std::size_t i = from; i < blown_sorted.size(); ++i) {
            int m = blown_sorted[i];
            if (!chain.empty()) {
                const Subspace& last = out.members[chain.back()];
                if (out.members[m].dim() >= last.dim() || !last.contains(out.members[m]))
                    continue;
            }
            chain.push_back(m);
            self(self, i + 1);
            chain.pop_back();
        }
    };
    extend(extend, 0);

    SplitMix64 rng(hash_combine(options.seed, 0xFACE5u));
    std::vector<ResolvedFace> collected;
    for (const std::vector<int>& ch : chains) {
        const Subspace& carrier = ch.empty() ? out.space : out.members[ch.back()];
        const auto& bundle = out.level_bundle(ch);
        // direction-level regions are marker independent
        std::vector<std::vector<Region>> u_regions;
        for (std::size_t j = 0; j < bundle.u.size(); ++j) {
            const LevelSpec& lv = bundle.u[j];
            LevelFrame fr = u_frame(lv);
            auto regions = enumerate_regions(frame_base_system(fr), frame_queries(fr, lv));
            if (regions.empty())
                throw Error("direction level with no regions");
            u_regions.push_back(std::move(regions));
        }
        // markers
        struct Marker {
            bool at_inf = false;
            std::vector<std::pair<int, int>> box;
        };
        std::vector<Marker> markers;
        if (out.kind == ModelKind::Ball) {
            markers.push_back({});
            if (carrier.dim() >= 1)
                markers.push_back({true, {}});
        } else {
            std::vector<int> coords = GeometricModel::box_coordinates(carrier);
            std::vector<int> pattern(coords.size(), 0);
            while (true) {
                Marker mk;
                for (std::size_t i = 0; i < coords.size(); ++i)
                    if (pattern[i] != 0)
                        mk.box.emplace_back(coords[i], pattern[i] == 1 ? 1 : -1);
                markers.push_back(std::move(mk));
                std::size_t i = 0;
                while (i < pattern.size() && pattern[i] == 2)
                    pattern[i++] = 0;
                if (i == pattern.size())
                    break;
                ++pattern[i];
            }
        }
        for (const Marker& mk : markers) {
            const LevelSpec& xl = bundle.x[mk.at_inf ? 1 : 0];
            LevelFrame fr = x_frame(out, carrier, mk.at_inf, mk.box);
            auto x_regions = enumerate_regions(frame_base_system(fr), frame_queries(fr, xl));
            for (const Region& xr : x_regions) {
                // product over direction-level regions
                std::vector<std::size_t> pick(u_regions.size(), 0);
                while (true) {
                    ResolvedFace face;
                    face.index.chain = ch;
                    face.index.at_infinity = mk.at_inf;
                    face.index.box_face = mk.box;
                    face.index.level_signs.push_back(xr.signs);
                    SplitMix64 face_rng(hash_combine(rng.next(), 17));
                    face.base_point = refine_sample(fr, xl, xr.signs, xr.sample, face_rng);
                    bool ok = true;
                    for (std::size_t j = 0; j < u_regions.size(); ++j) {
                        const Region& ur = u_regions[j][pick[j]];
                        face.index.level_signs.push_back(ur.signs);
                        LevelFrame ufr = u_frame(bundle.u[j]);
                        face.directions.push_back(
                            refine_sample(ufr, bundle.u[j], ur.signs, ur.sample, face_rng));
                    }
                    if (ok) {
                        face.codim = static_cast<int>(ch.size()) + (mk.at_inf ? 1 : 0) +
                                     static_cast<int>(mk.box.size());
                        face.carrier_member = out.member_id(carrier);
                        collected.push_back(std::move(face));
                    }
                    std::size_t j = 0;
                    while (j < pick.size() && pick[j] + 1 == u_regions[j].size())
                        pick[j++] = 0;
                    if (j == pick.size())
                        break;
                    ++pick[j];
                }
            }
        }
    }
    std::sort(collected.begin(), collected.end(), [](const ResolvedFace& a, const ResolvedFace& b) {
        if (a.codim != b.codim)
            return a.codim < b.codim;
        return ResolutionOutcome::face_key(a.index) < ResolutionOutcome::face_key(b.index);
    });
    out.faces = std::move(collected);
    for (std::size_t i = 0; i < out.faces.size(); ++i) {
        auto [it, fresh] = out.face_lookup_.emplace(ResolutionOutcome::face_key(out.faces[i].index),
                                                    static_cast<int>(i));
        if (!fresh)
            throw Error("duplicate face index");
    }
}

// --- complex and action assembly --------------------------------------------

inline void assemble_complex(ResolutionOutcome& out, const ResolveOptions& options) {
    const int nf = static_cast<int>(out.faces.size());
    // hypersurface ids = positions among codim-1 faces
    std::vector<int> hyp_of_face(nf, -1);
    std::vector<int> hyp_faces;
    for (int f = 0; f < nf; ++f)
        if (out.faces[f].codim == 1) {
            hyp_of_face[f] = static_cast<int>(hyp_faces.size());
            hyp_faces.push_back(f);
        }
    // per-face containing hypersurfaces and component via lex classification
    for (int f = 0; f < nf; ++f) {
        ResolvedFace& rf = out.faces[f];
        std::vector<Vec> tuple = ResolutionOutcome::lex_tuple(rf);
        auto locate = [&](std::vector<int> chain, bool at_inf,
                          std::vector<std::pair<int, int>> box) {
            FlagIndex ix = out.classify(std::move(chain), at_inf, std::move(box), tuple);
            return out.face_id(ResolutionOutcome::face_key(ix));
        };
        rf.component = locate({}, false, {});
        std::set<int> hyps;
        for (int m : rf.index.chain)
            hyps.insert(hyp_of_face[locate({m}, false, {})]);
        if (rf.index.at_infinity)
            hyps.insert(hyp_of_face[locate({}, true, {})]);
        for (auto mk : rf.index.box_face)
            hyps.insert(hyp_of_face[locate({}, false, {mk})]);
        rf.hyps.assign(hyps.begin(), hyps.end());
        if (static_cast<int>(rf.hyps.size()) != rf.codim)
            throw Error("face hypersurface count disagrees with codim");
    }
    // renumber components consecutively in face order
    std::map<int, int> comp_ids;
    for (int f = 0; f < nf; ++f) {
        int top = out.faces[f].component;
        auto [it, fresh] = comp_ids.try_emplace(top, static_cast<int>(comp_ids.size()));
        out.faces[f].component = it->second;
    }

    std::vector<std::string> labels;
    for (int hf : hyp_faces)
        labels.push_back(out.face_label(hf));
    std::vector<CornerComplex::Face> cfaces;
    std::vector<int> components;
    for (int f = 0; f < nf; ++f) {
        cfaces.push_back({out.faces[f].codim, out.faces[f].hyps, out.face_label(f)});
        components.push_back(out.faces[f].component);
    }
    if (nf <= options.incidence_threshold) {
        std::vector<std::pair<int, int>> incidence;
        for (int a = 0; a < nf; ++a)
            for (int b = 0; b < nf; ++b)
                if (a != b && out.faces[a].codim > out.faces[b].codim && out.face_below(a, b))
                    incidence.emplace_back(a, b);
        out.complex = CornerComplex(labels, cfaces, IncidenceMode::Explicit, incidence, components);
    } else {
        out.complex = CornerComplex(labels, cfaces, IncidenceMode::None, {}, components);
    }

    // the acting group as a lattice action
    const auto& ids = out.acting.ids();
    const int m = static_cast<int>(ids.size());
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    std::vector<std::vector<int>> face_perm(m, std::vector<int>(nf));
    std::vector<std::vector<int>> hyp_perm(m, std::vector<int>(hyp_faces.size()));
    out.acting_index_.assign(out.ref.order(), -1);
    for (int i = 0; i < m; ++i)
        out.acting_index_[ids[i]] = i;
    for (int i = 0; i < m; ++i) {
        names.push_back("g" + std::to_string(ids[i]));
        for (int j = 0; j < m; ++j)
            table[i][j] = out.acting_index_[out.ref.mul(ids[i], ids[j])];
        for (int f = 0; f < nf; ++f)
            face_perm[i][f] = out.act_on_face(ids[i], f);
        for (std::size_t h = 0; h < hyp_faces.size(); ++h)
            hyp_perm[i][h] = hyp_of_face[face_perm[i][hyp_faces[h]]];
    }
    out.action = LatticeAction::assemble(std::move(names), std::move(table), std::move(face_perm),
                                         std::move(hyp_perm), out.complex);
    for (std::size_t h = 0; h < hyp_faces.size(); ++h)
        if (out.faces[hyp_faces[h]].index.chain.empty())
            out.carrier_hyp_faces.push_back(hyp_faces[h]);
}

// --- resolution structure ----------------------------------------------------

inline void assemble_structure(ResolutionOutcome& out, const ResolveOptions& options,
                               PieceCache& cache) {
    bool fully_blown = true;
    for (std::size_t m = 0; m < out.members.size(); ++m)
        if (!(out.members[m] == out.space) && !out.blown_flags_[m])
            fully_blown = false;
    if (!fully_blown || !options.build_structure)
        return;

    // hypersurface id of each codim-1 face
    std::map<int, int> hyp_of_face;
    for (int h = 0; h < out.complex.num_hypersurfaces(); ++h)
        hyp_of_face[out.complex.hyp_face(h)] = h;

    for (const IsotropyClass& cls : out.classes) {
        if (cls.id == out.principal_class)
            continue;
        FibrationDescriptor fd;
        fd.class_id = cls.id;
        fd.fibration_codim = cls.codim - 1;
        const Subspace& w = out.members[cls.rep_member];

        // collective: the codim-1 front faces of this class's centers
        for (std::size_t f = 0; f < out.faces.size(); ++f) {
            const ResolvedFace& rf = out.faces[f];
            if (rf.codim == 1 && rf.index.chain.size() == 1 &&
                std::find(cls.members.begin(), cls.members.end(), rf.index.chain[0]) !=
                    cls.members.end())
                fd.hyp_faces.push_back(static_cast<int>(f));
        }

        // base: the piece carried by the representative, under its setwise
        // stabilizer, stratified by the ambient lattice below it
        std::vector<int> stab_ids;
        for (int a : out.acting.ids())
            if (out.member_image_[a][cls.rep_member] == cls.rep_member)
                stab_ids.push_back(a);
        PieceSpec base_spec;
        base_spec.kind = out.kind;
        base_spec.space = w;
        base_spec.ref = out.ref;
        base_spec.acting = Subgroup(out.ref, stab_ids);
        for (std::size_t m = 0; m < out.members.size(); ++m)
            if (w.contains(out.members[m])) {
                base_spec.members.push_back(out.members[m]);
                base_spec.member_groups.push_back(out.member_groups[m]);
            }
        base_spec.name = out.name + "/base" + std::to_string(cls.id);
        fd.induction_copies = out.acting.order() / static_cast<int>(stab_ids.size());
        fd.base = build_outcome(base_spec, options, cache);

        // fiber: the class stabilizer acting on the ball of the normal space
        Subspace normal = intersect(out.space, orthogonal_complement(w));
        std::vector<int> fib_ids;
        for (int a : out.acting.ids())
            if (cls.rep_group.contains(a))
                fib_ids.push_back(a);
        Subgroup fiber_group(out.ref, fib_ids);
        if (out.kind == ModelKind::Ball && normal == out.space &&
            fiber_group.ids() == out.acting.ids()) {
            fd.fiber_is_self = true;
        } else {
            MatrixGroup fg = subgroup_as_group(fiber_group, "normal");
            PieceSpec fiber_spec;
            fiber_spec.kind = ModelKind::Ball;
            fiber_spec.space = normal;
            fiber_spec.ref = fg;
            fiber_spec.acting = whole_group(fg);
            for (const Subspace& y : intersection_lattice(fg, normal)) {
                fiber_spec.members.push_back(y);
                fiber_spec.member_groups.push_back(pointwise_stabilizer(fg, y));
            }
            fiber_spec.name = out.name + "/fiber" + std::to_string(cls.id);
            fd.fiber = build_outcome(fiber_spec, options, cache);
        }

        out.collectives.emplace(cls.id, std::move(fd));
    }
    // projections need the finished descriptor table
    for (auto& [cid, fd] : out.collectives) {
        const IsotropyClass& cls = out.classes[cid];
        for (std::size_t f = 0; f < out.faces.size(); ++f) {
            const ResolvedFace& rf = out.faces[f];
            bool in_collective = false;
            for (int m : rf.index.chain)
                if (std::find(cls.members.begin(), cls.members.end(), m) != cls.members.end())
                    in_collective = true;
            if (in_collective)
                fd.projection[static_cast<int>(f)] = out.project_to_base(cid, static_cast<int>(f));
        }
    }
}

inline std::shared_ptr<const ResolutionOutcome> build_outcome(const PieceSpec& spec,
                                                              const ResolveOptions& options,
                                                              PieceCache& cache) {
    std::string key = piece_key(spec);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;

    auto out_ptr = std::make_shared<ResolutionOutcome>();
    ResolutionOutcome& out = *out_ptr;
    out.kind = spec.kind;
    out.space = spec.space;
    out.ref = spec.ref;
    out.acting = spec.acting;
    out.name = spec.name;
    out.is_top = spec.is_top;
    out.members = spec.members;
    out.member_groups = spec.member_groups;

    // kernel of the piece action
    {
        Subgroup fix = pointwise_stabilizer(out.ref, out.space);
        std::vector<int> ids;
        for (int a : out.acting.ids())
            if (fix.contains(a))
                ids.push_back(a);
        out.kernel = Subgroup(out.ref, ids);
    }
    // member images under every reference element (identity rows for
    // elements that do not preserve the member set)
    out.member_image_.assign(out.ref.order(), {});
    for (int g = 0; g < out.ref.order(); ++g) {
        std::vector<int> row(out.members.size());
        bool total = true;
        for (std::size_t m = 0; m < out.members.size(); ++m) {
            int im = -1;
            Subspace moved = out.ref.act(g, out.members[m]);
            for (std::size_t x = 0; x < out.members.size(); ++x)
                if (out.members[x] == moved)
                    im = static_cast<int>(x);
            if (im < 0) {
                total = false;
                break;
            }
            row[m] = im;
        }
        out.member_image_[g] = total ? row : std::vector<int>{};
    }
    for (int a : out.acting.ids())
        if (out.member_image_[a].empty())
            throw Error("acting element does not permute the lattice members");

    compute_classes(out);
    compute_trace(out, options);
    enumerate_faces(out, options);
    assemble_complex(out, options);
    if (out.is_top)
        out.public_poset = isotropy_poset(out.ref, out.space);
    assemble_structure(out, options, cache);

    auto shared = std::shared_ptr<const ResolutionOutcome>(out_ptr);
    cache.emplace(key, shared);
    return shared;
}

} // namespace detail

inline int ResolutionOutcome::project_to_base(int class_id, int f) const {
    const FibrationDescriptor& fd = collectives.at(class_id);
    const ResolutionOutcome& child = *fd.base;
    const IsotropyClass& cls = classes[class_id];
    const ResolvedFace& rf = faces[f];
    int pos = -1, mem = -1;
    for (std::size_t i = 0; i < rf.index.chain.size(); ++i)
        if (std::find(cls.members.begin(), cls.members.end(), rf.index.chain[i]) !=
            cls.members.end()) {
            pos = static_cast<int>(i);
            mem = rf.index.chain[i];
        }
    if (pos < 0)
        throw Error("project_to_base: face is not in the collective");
    int g = -1;
    for (int a : acting.ids())
        if (member_image_[a][mem] == cls.rep_member) {
            g = a;
            break;
        }
    if (g < 0)
        throw Error("project_to_base: no translator to the representative");
    std::vector<int> child_chain;
    for (std::size_t i = pos + 1; i < rf.index.chain.size(); ++i) {
        int cm = child.member_id(ref.act(g, members[rf.index.chain[i]]));
        if (cm < 0)
            throw Error("project_to_base: missing member downstairs");
        child_chain.push_back(cm);
    }
    std::vector<std::pair<int, int>> box = rf.index.box_face;
    for (auto& [coord, s] : box)
        if (ref.matrix(g)(coord, coord) < 0)
            s = -s;
    std::sort(box.begin(), box.end());
    std::vector<Vec> tuple;
    tuple.push_back(ref.act(g, rf.base_point));
    for (int i = static_cast<int>(rf.directions.size()) - 1; i >= pos + 1; --i)
        tuple.push_back(ref.act(g, rf.directions[i]));
    FlagIndex ix = child.classify(std::move(child_chain), rf.index.at_infinity, std::move(box), tuple);
    return child.face_id(face_key(ix));
}

inline std::pair<Vec, std::vector<Vec>> ResolutionOutcome::fresh_sample(int f,
                                                                        std::uint64_t seed) const {
    const ResolvedFace& rf = faces[f];
    const Subspace& carrier = rf.index.chain.empty() ? space : members[rf.index.chain.back()];
    const auto& bundle = level_bundle(rf.index.chain);
    SplitMix64 rng(hash_combine(seed, hash_combine(0xF00Du, f)));
    detail::LevelFrame xf = detail::x_frame(*this, carrier, rf.index.at_infinity, rf.index.box_face);
    // recover t-coordinates of the stored sample
    Vec t;
    if (kind == ModelKind::SignBox) {
        for (const Vec& d : xf.dirs) {
            int c = 0;
            while (d[c] == 0)
                ++c;
            t.push_back(rf.base_point[c]);
        }
    } else {
        t = coordinates_in(carrier, rf.base_point);
    }
    const LevelSpec& xl = bundle.x[rf.index.at_infinity ? 1 : 0];
    Vec jitter(t.size());
    for (auto& x : jitter)
        x = rng.small_rational();
    for (std::size_t a = 0; a < t.size(); ++a)
        t[a] += Rational(1, 1024) * jitter[a];
    Vec x = detail::refine_sample(xf, xl, rf.index.level_signs[0], t, rng);
    std::vector<Vec> dirs;
    for (std::size_t j = 0; j < bundle.u.size(); ++j) {
        detail::LevelFrame uf = detail::u_frame(bundle.u[j]);
        Vec tu = coordinates_in(bundle.u[j].space, rf.directions[j]);
        for (auto& c : tu)
            c += Rational(1, 1024) * rng.small_rational();
        dirs.push_back(detail::refine_sample(uf, bundle.u[j], rf.index.level_signs[j + 1], tu, rng));
    }
    return {std::move(x), std::move(dirs)};
}

inline ResolutionOutcome canonical_resolution(const GeometricModel& model,
                                              const ResolveOptions& options = {}) {
    // precondition: the action on the unresolved model boundary is boundary
    // intersection free
    auto [bc, ba] = model_boundary_complex(model);
    if (!check_boundary_intersection_free(bc, ba).ok)
        throw UnsupportedModel("model boundary action has boundary intersection");
    if (model.kind == ModelKind::SignBox)
        for (int e = 0; e < model.group.order(); ++e)
            for (const Subspace& w : intersection_lattice(model.group, model.space))
                GeometricModel::box_coordinates(w); // centers must be coordinate subspaces

    detail::PieceSpec spec;
    spec.kind = model.kind;
    spec.space = model.space;
    spec.ref = model.group;
    spec.acting = whole_group(model.group);
    spec.name = model.name.empty() ? "model" : model.name;
    spec.is_top = true;
    for (const Subspace& w : intersection_lattice(model.group, model.space)) {
        spec.members.push_back(w);
        spec.member_groups.push_back(pointwise_stabilizer(model.group, w));
    }
    detail::PieceCache cache;
    auto built = detail::build_outcome(spec, options, cache);
    return *built;
}

} // namespace eqc
