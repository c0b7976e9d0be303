#pragma once

#include <optional>
#include <set>
#include <vector>

#include "eqcorners/linalg.hpp"

namespace eqc {

// Strict affine inequality system over t in Q^d: each row r encodes
//   r[0]*t_0 + ... + r[d-1]*t_{d-1} + r[d] > 0.
// Solved exactly by Fourier-Motzkin elimination; the eliminated stages are
// kept so a strictly interior rational sample can be reconstructed.
class StrictSystem {
public:
    explicit StrictSystem(int dim) : dim_(dim) {}

    int dim() const { return dim_; }

    void add(Vec coeffs, const Rational& constant) {
        if (coeffs.size() != std::size_t(dim_))
            throw DimensionMismatch("StrictSystem::add: coefficient length");
        coeffs.push_back(constant);
        rows_.push_back(normalize(std::move(coeffs)));
    }

    void add_homogeneous(const Vec& coeffs) { add(coeffs, Rational(0)); }

    bool feasible() const { return solve().has_value(); }

    // A rational t with every row strictly positive, if one exists.
    std::optional<Vec> sample() const { return solve(); }

private:
    int dim_;
    std::vector<Vec> rows_;

    // Scale to coprime integers with a deterministic sign convention
    // (first nonzero entry of the scaled row keeps its sign).
    static Vec normalize(Vec r) {
        Integer lcm_den = 1;
        for (const Rational& x : r)
            lcm_den = lcm(lcm_den, denominator(x));
        Integer gcd_num = 0;
        for (Rational& x : r) {
            Integer n = numerator(x) * (lcm_den / denominator(x));
            x = Rational(n);
            gcd_num = gcd(gcd_num, n);
        }
        if (gcd_num != 0)
            for (Rational& x : r)
                x /= Rational(gcd_num);
        return r;
    }

    std::optional<Vec> solve() const {
        // stages[k] = system over variables t_0..t_{k-1}
        std::vector<std::vector<Vec>> stages(dim_ + 1);
        {
            std::set<Vec> dedup(rows_.begin(), rows_.end());
            stages[dim_].assign(dedup.begin(), dedup.end());
        }
        for (int k = dim_; k >= 1; --k) {
            std::set<Vec> next;
            std::vector<const Vec*> pos, neg;
            for (const Vec& r : stages[k]) {
                const Rational& c = r[k - 1];
                if (c > 0)
                    pos.push_back(&r);
                else if (c < 0)
                    neg.push_back(&r);
                else {
                    Vec shorter(r.begin(), r.begin() + (k - 1));
                    shorter.push_back(r[k]); // constant
                    if (is_zero_row(shorter)) {
                        if (shorter.back() <= 0)
                            return std::nullopt;
                    } else {
                        next.insert(normalize(std::move(shorter)));
                    }
                }
            }
            for (const Vec* p : pos)
                for (const Vec* n : neg) {
                    // c_p * rest_n + (-c_n) * rest_p > 0
                    Vec comb(k, Rational(0));
                    const Rational cp = (*p)[k - 1], cn = (*n)[k - 1];
                    for (int j = 0; j < k - 1; ++j)
                        comb[j] = cp * (*n)[j] - cn * (*p)[j];
                    comb[k - 1] = cp * (*n)[k] - cn * (*p)[k]; // constant slot
                    if (is_zero_row(comb)) {
                        if (comb.back() <= 0)
                            return std::nullopt;
                    } else {
                        next.insert(normalize(std::move(comb)));
                    }
                }
            stages[k - 1].assign(next.begin(), next.end());
        }
        for (const Vec& r : stages[0])
            if (r[0] <= 0)
                return std::nullopt;

        // Back-substitute, picking each t_k strictly between its bounds.
        Vec t(dim_, Rational(0));
        for (int k = 1; k <= dim_; ++k) {
            bool has_lo = false, has_hi = false;
            Rational lo = 0, hi = 0;
            for (const Vec& r : stages[k]) {
                const Rational& c = r[k - 1];
                if (c == 0)
                    continue;
                Rational rest = r[k]; // constant
                for (int j = 0; j < k - 1; ++j)
                    rest += r[j] * t[j];
                Rational bound = -rest / c;
                if (c > 0) {
                    if (!has_lo || bound > lo)
                        lo = bound, has_lo = true;
                } else {
                    if (!has_hi || bound < hi)
                        hi = bound, has_hi = true;
                }
            }
            if (has_lo && has_hi)
                t[k - 1] = (lo + hi) / 2;
            else if (has_lo)
                t[k - 1] = lo + 1;
            else if (has_hi)
                t[k - 1] = hi - 1;
            else
                t[k - 1] = 0;
        }
        return t;
    }

    static bool is_zero_row(const Vec& r) {
        for (std::size_t j = 0; j + 1 < r.size(); ++j)
            if (r[j] != 0)
                return false;
        return true;
    }
};

// One open region of an arrangement of linear functionals, cut out of a base
// system of strict constraints: the sign of each functional plus a strictly
// interior rational sample in the t-coordinates.
struct Region {
    std::vector<int> signs;
    Vec sample;
};

// Enumerate the regions of {queries} over the feasible set of `base`.
// Queries of length dim are homogeneous functionals; length dim+1 carries an
// affine constant. Exhaustive: a sign vector is reported iff its open region
// is nonempty.
inline std::vector<Region> enumerate_regions(const StrictSystem& base, const std::vector<Vec>& queries) {
    std::vector<std::pair<std::vector<int>, StrictSystem>> work;
    if (!base.feasible())
        return {};
    work.emplace_back(std::vector<int>{}, base);
    for (const Vec& q : queries) {
        Vec coeffs(q.begin(), q.begin() + base.dim());
        Rational constant = q.size() > std::size_t(base.dim()) ? q[base.dim()] : Rational(0);
        std::vector<std::pair<std::vector<int>, StrictSystem>> next;
        for (auto& [signs, sys] : work) {
            for (int s : {+1, -1}) {
                StrictSystem cut = sys;
                cut.add(s > 0 ? coeffs : Rational(-1) * coeffs,
                        s > 0 ? constant : -constant);
                if (cut.feasible()) {
                    auto signs2 = signs;
                    signs2.push_back(s);
                    next.emplace_back(std::move(signs2), std::move(cut));
                }
            }
        }
        work = std::move(next);
    }
    std::vector<Region> out;
    out.reserve(work.size());
    for (auto& [signs, sys] : work) {
        Region r;
        r.signs = signs;
        r.sample = *sys.sample();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace eqc
