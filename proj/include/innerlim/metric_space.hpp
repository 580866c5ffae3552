#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "innerlim/errors.hpp"

namespace innerlim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Finite metric space: a labeled point set with a full symmetric distance
// matrix. Immutable after construction; the universal currency of the toolkit.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    static FiniteMetricSpace from_flat(int n, std::vector<double> flat,
                                       std::vector<std::string> labels = {}) {
        if (n < 0 || flat.size() != static_cast<std::size_t>(n) * n)
            fail("NonSquare", "flat matrix size does not equal n*n");
        if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
            fail("InvalidLabels", "label count does not match point count");
        FiniteMetricSpace X;
        X.n_ = n;
        X.d_ = std::move(flat);
        X.labels_ = std::move(labels);
        return X;
    }

    static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels = {}) {
        const int n = static_cast<int>(rows.size());
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& r : rows) {
            if (r.size() != static_cast<std::size_t>(n))
                fail("NonSquare", "row length does not equal row count");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return from_flat(n, std::move(flat), std::move(labels));
    }

    // Strict upper triangle, row-major: d(0,1), d(0,2), ..., d(n-2,n-1).
    static FiniteMetricSpace from_upper(int n, const std::vector<double>& upper,
                                        std::vector<std::string> labels = {}) {
        if (n < 0 || upper.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
            fail("NonSquare", "upper triangle size does not match n");
        std::vector<double> flat(static_cast<std::size_t>(n) * n, 0.0);
        std::size_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                flat[static_cast<std::size_t>(i) * n + j] = upper[k];
                flat[static_cast<std::size_t>(j) * n + i] = upper[k];
                ++k;
            }
        return from_flat(n, std::move(flat), std::move(labels));
    }

    int size() const { return n_; }
    bool empty() const { return n_ == 0; }

    double d(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    const double* row(int i) const { return d_.data() + static_cast<std::size_t>(i) * n_; }
    const std::vector<double>& flat() const { return d_; }

    const std::vector<std::string>& labels() const { return labels_; }

    std::vector<double> upper_triangle() const {
        std::vector<double> u;
        u.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) u.push_back(d(i, j));
        return u;
    }

private:
    int n_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> d_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

inline SpacePtr make_space(FiniteMetricSpace X) {
    return std::make_shared<const FiniteMetricSpace>(std::move(X));
}

inline double diameter(const FiniteMetricSpace& X) {
    double m = 0.0;
    for (int i = 0; i < X.size(); ++i) {
        const double* r = X.row(i);
        for (int j = i + 1; j < X.size(); ++j) m = std::max(m, r[j]);
    }
    return m;
}

enum class MetricIssue {
    none,
    non_square,
    non_finite,
    negative_entry,
    nonzero_diagonal,
    asymmetric,
    triangle
};

inline const char* to_string(MetricIssue issue) {
    switch (issue) {
        case MetricIssue::none: return "none";
        case MetricIssue::non_square: return "NonSquare";
        case MetricIssue::non_finite: return "NonFinite";
        case MetricIssue::negative_entry: return "NegativeEntry";
        case MetricIssue::nonzero_diagonal: return "NonzeroDiagonal";
        case MetricIssue::asymmetric: return "Asymmetric";
        case MetricIssue::triangle: return "TriangleInequality";
    }
    return "unknown";
}

struct ValidationReport {
    bool ok = true;
    MetricIssue issue = MetricIssue::none;
    std::array<int, 3> witness{-1, -1, -1};  // (i,j,k) for triangle, (i,j,-1) otherwise
    double violation = 0.0;

    explicit operator bool() const { return ok; }
};

namespace detail {

inline ValidationReport fail_report(MetricIssue issue, int i, int j, int k, double v) {
    ValidationReport r;
    r.ok = false;
    r.issue = issue;
    r.witness = {i, j, k};
    r.violation = v;
    return r;
}

// Full metric-axiom check on a flat symmetric candidate matrix. Reports the
// lexicographically first violating pair/triple.
inline ValidationReport validate_metric_flat(const double* d, int n, double tol_triangle) {
    for (int i = 0; i < n; ++i) {
        const double* ri = d + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double v = ri[j];
            if (!std::isfinite(v)) return fail_report(MetricIssue::non_finite, i, j, -1, v);
            if (v < 0.0) return fail_report(MetricIssue::negative_entry, i, j, -1, v);
        }
        if (ri[i] != 0.0) return fail_report(MetricIssue::nonzero_diagonal, i, i, -1, ri[i]);
        for (int j = i + 1; j < n; ++j) {
            const double ji = d[static_cast<std::size_t>(j) * n + i];
            if (ri[j] != ji)
                return fail_report(MetricIssue::asymmetric, i, j, -1, std::fabs(ri[j] - ji));
        }
    }
    // d[i][k] <= d[i][j] + d[j][k] + tol for all triples; chunked max keeps the
    // inner scan branch-free until a chunk actually violates.
    constexpr int kChunk = 256;
    for (int i = 0; i < n; ++i) {
        const double* ri = d + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* rj = d + static_cast<std::size_t>(j) * n;
            const double cap = ri[j] + tol_triangle;
            for (int k0 = 0; k0 < n; k0 += kChunk) {
                const int k1 = std::min(n, k0 + kChunk);
                double worst = -kInf;
                for (int k = k0; k < k1; ++k) worst = std::max(worst, ri[k] - rj[k]);
                if (worst > cap) {
                    for (int k = k0; k < k1; ++k)
                        if (ri[k] - rj[k] > cap)
                            return fail_report(MetricIssue::triangle, i, j, k,
                                               ri[k] - rj[k] - ri[j]);
                }
            }
        }
    }
    return ValidationReport{};
}

}  // namespace detail

inline ValidationReport validate_metric(const FiniteMetricSpace& X, double tol_triangle = 0.0) {
    return detail::validate_metric_flat(X.flat().data(), X.size(), tol_triangle);
}

inline ValidationReport validate_metric(const std::vector<std::vector<double>>& rows,
                                        double tol_triangle = 0.0) {
    const int n = static_cast<int>(rows.size());
    for (int i = 0; i < n; ++i)
        if (rows[i].size() != static_cast<std::size_t>(n))
            return detail::fail_report(MetricIssue::non_square, i, -1, -1, 0.0);
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return detail::validate_metric_flat(flat.data(), n, tol_triangle);
}

// Subset of a parent space carrying the restricted metric; distances are read
// from the parent, never recomputed.
struct Subspace {
    SpacePtr parent;
    std::vector<int> indices;

    int size() const { return static_cast<int>(indices.size()); }
    double d(int a, int b) const { return parent->d(indices[a], indices[b]); }

    FiniteMetricSpace materialize() const {
        const int m = size();
        std::vector<double> flat(static_cast<std::size_t>(m) * m);
        std::vector<std::string> labels;
        const bool lab = !parent->labels().empty();
        if (lab) labels.reserve(m);
        for (int a = 0; a < m; ++a) {
            const double* prow = parent->row(indices[a]);
            for (int b = 0; b < m; ++b)
                flat[static_cast<std::size_t>(a) * m + b] = prow[indices[b]];
            if (lab) labels.push_back(parent->labels()[indices[a]]);
        }
        return FiniteMetricSpace::from_flat(m, std::move(flat), std::move(labels));
    }
};

inline Subspace restrict_space(SpacePtr parent, std::vector<int> indices) {
    std::unordered_set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= parent->size())
            fail("IndexOutOfRange", "subspace index " + std::to_string(i));
        if (!seen.insert(i).second)
            fail("DuplicateIndex", "subspace index " + std::to_string(i) + " repeated");
    }
    return Subspace{std::move(parent), std::move(indices)};
}

inline std::vector<int> closed_ball(const FiniteMetricSpace& X, int center, double r) {
    if (center < 0 || center >= X.size()) fail("IndexOutOfRange", "ball center");
    if (r < 0.0) fail("InvalidRadius", "negative ball radius");
    std::vector<int> out;
    const double* row = X.row(center);
    for (int i = 0; i < X.size(); ++i)
        if (row[i] <= r) out.push_back(i);
    return out;
}

// min_{a in A} d(x, a)
inline double set_distance(const FiniteMetricSpace& X, int x, const std::vector<int>& A) {
    if (A.empty()) fail("EmptySubset", "distance to empty subset");
    double best = kInf;
    const double* row = X.row(x);
    for (int a : A) best = std::min(best, row[a]);
    return best;
}

// T_r(A) = { x : d(x, A) < r }, strict by definition.
inline std::vector<int> tubular_neighborhood(const FiniteMetricSpace& X,
                                             const std::vector<int>& A, double r) {
    if (A.empty()) fail("EmptySubset", "tubular neighborhood of empty subset");
    std::vector<int> out;
    for (int x = 0; x < X.size(); ++x)
        if (set_distance(X, x, A) < r) out.push_back(x);
    return out;
}

inline double hausdorff_distance(const FiniteMetricSpace& X, const std::vector<int>& A,
                                 const std::vector<int>& B) {
    if (A.empty() || B.empty()) fail("EmptySubset", "Hausdorff distance needs nonempty subsets");
    double h = 0.0;
    for (int a : A) h = std::max(h, set_distance(X, a, B));
    for (int b : B) h = std::max(h, set_distance(X, b, A));
    return h;
}

struct IsometryReport {
    std::vector<int> map;
    double max_distortion = 0.0;
    bool injective = true;
    std::array<int, 2> worst_pair{-1, -1};

    bool passes(double tol) const { return injective && max_distortion <= tol; }
};

inline IsometryReport is_isometric_embedding(const FiniteMetricSpace& src,
                                             const FiniteMetricSpace& dst,
                                             const std::vector<int>& map, double) {
    if (map.size() != static_cast<std::size_t>(src.size()))
        fail("InvalidMap", "map is not total on the source");
    for (int v : map)
        if (v < 0 || v >= dst.size()) fail("InvalidMap", "map value out of range");
    IsometryReport rep;
    rep.map = map;
    std::unordered_set<int> seen;
    for (int v : map)
        if (!seen.insert(v).second) rep.injective = false;
    for (int a = 0; a < src.size(); ++a) {
        const double* sa = src.row(a);
        const double* da = dst.row(map[a]);
        for (int b = a + 1; b < src.size(); ++b) {
            const double dev = std::fabs(sa[b] - da[map[b]]);
            if (dev > rep.max_distortion) {
                rep.max_distortion = dev;
                rep.worst_pair = {a, b};
            }
        }
    }
    return rep;
}

}  // namespace innerlim
