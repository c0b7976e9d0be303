#pragma once

#include <string>

#include "eqcorners/corners.hpp"
#include "eqcorners/group.hpp"
#include "eqcorners/linalg.hpp"

namespace eqc {

enum class ModelKind { Ball, SignBox };

inline std::string to_string(ModelKind k) {
    return k == ModelKind::Ball ? "ball" : "signbox";
}

// A compactified linear model: the ball (radial compactification) or the
// sign box [-1,1]^dim carried by `space`, acted on by `group`. Sub-models on
// proper subspaces arise as bases and fibers of resolution structures.
struct GeometricModel {
    ModelKind kind = ModelKind::Ball;
    MatrixGroup group;
    Subspace space;
    std::string name;

    int dim() const { return space.dim(); }
    int ambient_dim() const { return space.ambient(); }

    static GeometricModel ball(MatrixGroup g, std::string name = "") {
        return make(ModelKind::Ball, std::move(g), {}, std::move(name));
    }

    static GeometricModel signbox(MatrixGroup g, std::string name = "") {
        return make(ModelKind::SignBox, std::move(g), {}, std::move(name));
    }

    static GeometricModel sub_model(ModelKind kind, MatrixGroup g, Subspace space,
                                    std::string name = "") {
        return make(kind, std::move(g), std::move(space), std::move(name));
    }

    // Coordinates spanned by a coordinate subspace; SignBox carriers only.
    static std::vector<int> box_coordinates(const Subspace& s) {
        std::vector<int> coords;
        for (const Vec& row : s.basis()) {
            int nz = -1;
            for (int j = 0; j < s.ambient(); ++j) {
                if (row[j] == 0)
                    continue;
                if (nz >= 0 || row[j] != 1)
                    throw UnsupportedModel("sign-box carrier is not a coordinate subspace");
                nz = j;
            }
            coords.push_back(nz);
        }
        return coords;
    }

private:
    static GeometricModel make(ModelKind kind, MatrixGroup g, Subspace space, std::string name) {
        GeometricModel m;
        m.kind = kind;
        m.group = std::move(g);
        m.space = space.ambient() == 0 ? Subspace::full(m.group.ambient_dim()) : std::move(space);
        m.name = std::move(name);
        if (m.space.ambient() != m.group.ambient_dim())
            throw DimensionMismatch("model space and group dimensions disagree");
        for (int i = 0; i < m.group.order(); ++i)
            if (!(m.group.act(i, m.space) == m.space))
                throw UnsupportedModel("group does not preserve the model subspace");
        if (m.kind == ModelKind::SignBox) {
            for (int i = 0; i < m.group.order(); ++i)
                if (!m.group.matrix(i).is_diagonal_sign())
                    throw UnsupportedModel("sign-box models require diagonal +-1 matrices");
            box_coordinates(m.space); // throws unless a coordinate subspace
        }
        return m;
    }
};

// Face complex of the unresolved model boundary, with the induced action;
// used for the boundary-intersection-free precondition. The 1-ball is the
// interval, so both kinds share the box path in dimension one.
inline std::pair<CornerComplex, LatticeAction> model_boundary_complex(const GeometricModel& m) {
    const int d = m.dim();
    if (m.kind == ModelKind::Ball && d >= 2) {
        CornerComplex c = ball_complex(d);
        return {c, LatticeAction::from_matrix_group(c, m.group, false)};
    }
    CornerComplex c = box_complex(d);
    std::vector<Mat> restricted;
    std::vector<std::vector<int>> table(m.group.order(), std::vector<int>(m.group.order()));
    for (int e = 0; e < m.group.order(); ++e) {
        Mat r(d, d);
        if (m.kind == ModelKind::SignBox) {
            std::vector<int> coords = GeometricModel::box_coordinates(m.space);
            for (int a = 0; a < d; ++a)
                r(a, a) = m.group.matrix(e)(coords[a], coords[a]);
        } else if (d == 1) {
            // the element acts on the line as a sign
            const Vec& b = m.space.basis()[0];
            Vec gb = m.group.act(e, b);
            r(0, 0) = gb == b ? 1 : -1;
        }
        restricted.push_back(std::move(r));
        for (int f = 0; f < m.group.order(); ++f)
            table[e][f] = m.group.mul(e, f);
    }
    MatrixGroup g = MatrixGroup::from_table(restricted, table, m.group.name());
    return {c, LatticeAction::from_matrix_group(c, g, true)};
}

} // namespace eqc
