#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <thread>
#include <utility>
#include <vector>

#include "innerlim/errors.hpp"
#include "innerlim/metric_space.hpp"

namespace innerlim {

// Undirected weighted graph in CSR form. Geodesic-graph approximations live
// here; all metric computations reduce to shortest paths on it.
struct WeightedGraph {
    int n = 0;
    std::vector<int> offsets;  // n + 1
    std::vector<int> nbr;
    std::vector<double> wt;
    double min_weight = kInf;
    double max_weight = 0.0;

    struct Edge {
        int a, b;
        double w;
    };

    static WeightedGraph from_edges(int n, const std::vector<Edge>& edges) {
        WeightedGraph g;
        g.n = n;
        g.offsets.assign(n + 1, 0);
        for (const auto& e : edges) {
            ++g.offsets[e.a + 1];
            ++g.offsets[e.b + 1];
        }
        for (int i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
        g.nbr.resize(g.offsets[n]);
        g.wt.resize(g.offsets[n]);
        std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
        for (const auto& e : edges) {
            g.nbr[cursor[e.a]] = e.b;
            g.wt[cursor[e.a]++] = e.w;
            g.nbr[cursor[e.b]] = e.a;
            g.wt[cursor[e.b]++] = e.w;
            g.min_weight = std::min(g.min_weight, e.w);
            g.max_weight = std::max(g.max_weight, e.w);
        }
        return g;
    }

    std::size_t edge_count() const { return nbr.size() / 2; }
};

// Single-source shortest paths with reusable scratch. Uses a Dial-style
// bucket queue when edge weights allow (geometric graphs: near-uniform
// weights), else a binary heap. Distances of unreachable vertices are +inf.
class SsspEngine {
public:
    explicit SsspEngine(const WeightedGraph& g)
        : g_(&g),
          dist_(g.n, kInf),
          stamp_(g.n, 0),
          epoch_(0),
          bucket_width_(0.0) {
        const bool bucketable = g.min_weight > 1e-12 && g.max_weight / g.min_weight < 1e4;
        if (bucketable) bucket_width_ = g.min_weight;
    }

    const std::vector<double>& run(int source) {
        return run_multi({{source, 0.0}});
    }

    const std::vector<double>& run_multi(const std::vector<std::pair<int, double>>& seeds) {
        ++epoch_;
        if (bucket_width_ > 0.0)
            run_buckets(seeds);
        else
            run_heap(seeds);
        // normalize untouched entries lazily
        for (int v = 0; v < g_->n; ++v)
            if (stamp_[v] != epoch_) dist_[v] = kInf;
        return dist_;
    }

private:
    double& label(int v) {
        if (stamp_[v] != epoch_) {
            stamp_[v] = epoch_;
            dist_[v] = kInf;
        }
        return dist_[v];
    }

    // Dial-style monotone bucket queue over intrusive lists. Everything is
    // index-based: pushes may grow the node pool and the bucket table, so no
    // reference or pointer is held across them.
    void run_buckets(const std::vector<std::pair<int, double>>& seeds) {
        bucket_head_.clear();
        pool_.clear();
        long live = 0;
        auto push = [&](int v, double d) {
            const std::size_t b = static_cast<std::size_t>(d / bucket_width_);
            if (b >= bucket_head_.size()) bucket_head_.resize(b + 1, -1);
            pool_.push_back({v, bucket_head_[b]});
            bucket_head_[b] = static_cast<int>(pool_.size()) - 1;
            ++live;
        };
        for (const auto& [v, d0] : seeds) {
            double& dv = label(v);
            if (d0 < dv) {
                dv = d0;
                push(v, d0);
            }
        }
        for (std::size_t b = 0; b < bucket_head_.size() && live > 0; ++b) {
            // a relaxation can land back in bucket b only through rounding at
            // the bucket edge; draining until the list stays empty covers it
            while (bucket_head_[b] != -1) {
                int it = bucket_head_[b];
                bucket_head_[b] = -1;
                while (it != -1) {
                    const int u = pool_[it].first;
                    const int nxt = pool_[it].second;
                    --live;
                    const double du = label(u);
                    if (static_cast<std::size_t>(du / bucket_width_) == b) {
                        const int beg = g_->offsets[u], end = g_->offsets[u + 1];
                        for (int e = beg; e < end; ++e) {
                            const int v = g_->nbr[e];
                            const double nd = du + g_->wt[e];
                            double& dv = label(v);
                            if (nd < dv) {
                                dv = nd;
                                push(v, nd);
                            }
                        }
                    }
                    it = nxt;
                }
            }
        }
    }

    void run_heap(const std::vector<std::pair<int, double>>& seeds) {
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        for (const auto& [v, d0] : seeds) {
            double& dv = label(v);
            if (d0 < dv) {
                dv = d0;
                pq.push({d0, v});
            }
        }
        while (!pq.empty()) {
            const auto [du, u] = pq.top();
            pq.pop();
            if (du > label(u)) continue;
            const int beg = g_->offsets[u], end = g_->offsets[u + 1];
            for (int e = beg; e < end; ++e) {
                const int v = g_->nbr[e];
                const double nd = du + g_->wt[e];
                double& dv = label(v);
                if (nd < dv) {
                    dv = nd;
                    pq.push({nd, v});
                }
            }
        }
    }

    const WeightedGraph* g_;
    std::vector<double> dist_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_;
    double bucket_width_;
    std::vector<int> bucket_head_;
    std::vector<std::pair<int, int>> pool_;  // (vertex, next)
};

// Connected components over an optional vertex subset (empty = all).
// Returns (label per vertex, component count); labels of excluded vertices
// are -1. Component labels are assigned in first-seen vertex order.
inline std::pair<std::vector<int>, int> connected_components(const WeightedGraph& g,
                                                             const std::vector<int>& subset = {}) {
    std::vector<char> in(g.n, subset.empty() ? 1 : 0);
    for (int v : subset) in[v] = 1;
    std::vector<int> label(g.n, -1);
    int comp = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (!in[s] || label[s] >= 0) continue;
        stack.push_back(s);
        label[s] = comp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
                const int v = g.nbr[e];
                if (in[v] && label[v] < 0) {
                    label[v] = comp;
                    stack.push_back(v);
                }
            }
        }
        ++comp;
    }
    return {std::move(label), comp};
}

// Induced subgraph on `indices` (edges with both endpoints retained).
inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<int>& indices) {
    std::vector<int> pos(g.n, -1);
    for (int i = 0; i < static_cast<int>(indices.size()); ++i) pos[indices[i]] = i;
    std::vector<WeightedGraph::Edge> edges;
    for (int a = 0; a < static_cast<int>(indices.size()); ++a) {
        const int u = indices[a];
        for (int e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            const int v = g.nbr[e];
            if (pos[v] > a) edges.push_back({a, pos[v], g.wt[e]});
        }
    }
    return WeightedGraph::from_edges(static_cast<int>(indices.size()), edges);
}

// Dense |S| x |S| geodesic matrix restricted to `points`, by one SSSP per
// source. Rows are independent, so an optional thread count only changes
// wall time, never the result.
inline FiniteMetricSpace geodesic_matrix(const WeightedGraph& g, const std::vector<int>& points,
                                         int threads = 0) {
    const int m = static_cast<int>(points.size());
    std::vector<double> flat(static_cast<std::size_t>(m) * m);
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw ? static_cast<int>(hw) : 1;
    }
    threads = std::min(threads, std::max(1, m));
    auto work = [&](int t0, int t1) {
        SsspEngine engine(g);
        for (int s = t0; s < t1; ++s) {
            const auto& dist = engine.run(points[s]);
            double* out = flat.data() + static_cast<std::size_t>(s) * m;
            for (int t = 0; t < m; ++t) out[t] = dist[points[t]];
        }
    };
    if (threads == 1) {
        work(0, m);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (m + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int a = t * chunk, b = std::min(m, a + chunk);
            if (a < b) pool.emplace_back(work, a, b);
        }
        for (auto& th : pool) th.join();
    }
    // opposite-direction runs can disagree by an ulp; the upper triangle wins
    for (int i = 0; i < m; ++i) {
        flat[static_cast<std::size_t>(i) * m + i] = 0.0;
        for (int j = i + 1; j < m; ++j)
            flat[static_cast<std::size_t>(j) * m + i] = flat[static_cast<std::size_t>(i) * m + j];
    }
    return FiniteMetricSpace::from_flat(m, std::move(flat));
}

}  // namespace innerlim
