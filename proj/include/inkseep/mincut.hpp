#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "inkseep/energy.hpp"
#include "inkseep/grid.hpp"

namespace inkseep {

/// Thrown when a model cannot be reduced to a min-cut problem: the global
/// volume coupling (lambda != 0) is outside what the optimizer handles.
struct unsupported_model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a pair weight is positive (non-submodular energy).
struct non_submodular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// s-t network encoding of a lambda = 0 pairwise model. Energies are scaled
/// to 64-bit integers (capacity unit = quantum) so the cut is exact and
/// reproducible. Source side = empty (sigma 0), sink side = ink (sigma 1):
/// cut_value = min_sigma energy_pairwise(sigma) + reparam_constant.
class FlowNetwork {
public:
    FlowNetwork(int node_count, int source, int sink)
        : source_(source), sink_(sink), head_(static_cast<std::size_t>(node_count), -1) {}

    int node_count() const { return static_cast<int>(head_.size()); }
    int source() const { return source_; }
    int sink() const { return sink_; }

    void add_edge(int u, int v, std::int64_t cap_uv, std::int64_t cap_vu) {
        push_arc(u, v, cap_uv);
        push_arc(v, u, cap_vu);
    }

    /// Dinic max flow; arc order is fixed by construction, so repeated runs
    /// give identical flows and labelings.
    std::int64_t max_flow() {
        std::int64_t flow = 0;
        std::vector<int> level(head_.size());
        std::vector<int> it(head_.size());
        for (;;) {
            std::fill(level.begin(), level.end(), -1);
            level[static_cast<std::size_t>(source_)] = 0;
            std::queue<int> q;
            q.push(source_);
            while (!q.empty()) {
                const int u = q.front();
                q.pop();
                for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = next_[static_cast<std::size_t>(a)]) {
                    const int v = to_[static_cast<std::size_t>(a)];
                    if (cap_[static_cast<std::size_t>(a)] > 0 && level[static_cast<std::size_t>(v)] < 0) {
                        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                        q.push(v);
                    }
                }
            }
            if (level[static_cast<std::size_t>(sink_)] < 0) break;
            for (std::size_t i = 0; i < head_.size(); ++i) it[i] = head_[i];
            for (;;) {
                const std::int64_t pushed =
                    dfs(source_, std::numeric_limits<std::int64_t>::max(), level, it);
                if (pushed == 0) break;
                flow += pushed;
            }
        }
        return flow;
    }

    /// After max_flow: nodes that can still reach the sink in the residual
    /// graph. These form the minimal sink side, i.e. every node that is
    /// source-side in some minimum cut is reported as source-side.
    std::vector<char> sink_side() const {
        std::vector<char> reach(head_.size(), 0);
        std::vector<int> stack{sink_};
        reach[static_cast<std::size_t>(sink_)] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int a = head_[static_cast<std::size_t>(v)]; a != -1; a = next_[static_cast<std::size_t>(a)]) {
                // arc a is v->w; its partner (a^1) is w->v. Residual on w->v
                // means w can step to v and inherit reachability.
                const int w = to_[static_cast<std::size_t>(a)];
                if (!reach[static_cast<std::size_t>(w)] && cap_[static_cast<std::size_t>(a ^ 1)] > 0) {
                    reach[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
        return reach;
    }

private:
    void push_arc(int u, int v, std::int64_t c) {
        to_.push_back(v);
        cap_.push_back(c);
        next_.push_back(head_[static_cast<std::size_t>(u)]);
        head_[static_cast<std::size_t>(u)] = static_cast<int>(to_.size()) - 1;
    }

    std::int64_t dfs(int u, std::int64_t limit, const std::vector<int>& level,
                     std::vector<int>& it) {
        if (u == sink_) return limit;
        for (int& a = it[static_cast<std::size_t>(u)]; a != -1; a = next_[static_cast<std::size_t>(a)]) {
            const int v = to_[static_cast<std::size_t>(a)];
            if (cap_[static_cast<std::size_t>(a)] <= 0 ||
                level[static_cast<std::size_t>(v)] != level[static_cast<std::size_t>(u)] + 1)
                continue;
            const std::int64_t pushed =
                dfs(v, std::min(limit, cap_[static_cast<std::size_t>(a)]), level, it);
            if (pushed > 0) {
                cap_[static_cast<std::size_t>(a)] -= pushed;
                cap_[static_cast<std::size_t>(a ^ 1)] += pushed;
                return pushed;
            }
        }
        return 0;
    }

    int source_;
    int sink_;
    std::vector<int> head_;
    std::vector<int> to_;
    std::vector<int> next_;
    std::vector<std::int64_t> cap_;
};

/// Network plus the bookkeeping needed to map a cut back to energies.
struct CutProblem {
    FlowNetwork network{2, 0, 1};
    Grid grid{1, 1, 1, 0, 1.0};
    std::vector<std::int32_t> cell_node;  // -1 for cells clamped to sigma = 0
    double quantum = 0.0;
    std::int64_t reparam_units = 0;  // cut - reparam_units = scaled min energy
    double reparam_constant() const {
        return -static_cast<double>(reparam_units) * quantum;
    }
};

/// Reduces the pairwise model to a min s-t cut. Requires lambda = 0 (the
/// volume term couples nearly all cell pairs and has positive weight, so it
/// has no cut encoding) and non-positive pair weights. `clamp_zero`, when
/// given, fixes sigma = 0 on its set cells (solid cells hold no ink) and
/// leaves them out of the network.
inline CutProblem build_network(const PairwiseModel& model,
                                const BinaryField* clamp_zero = nullptr) {
    if (model.lambda != 0.0)
        throw unsupported_model_error(
            "build_network: volume-constrained model (lambda != 0) cannot be "
            "globally optimized by graph cuts; set lambda = 0");
    if (model.v1 > 0.0 || model.v2 > 0.0)
        throw non_submodular_error("build_network: positive pair weight");

    const CellIndex cells = static_cast<CellIndex>(model.d1.size());
    CutProblem p;
    p.grid = model.grid;
    p.quantum = 1e-9 * (model.c1 > 0.0 ? model.c1 : 1.0);
    p.cell_node.assign(static_cast<std::size_t>(cells), -1);

    int nodes = 0;
    for (CellIndex i = 0; i < cells; ++i)
        if (!clamp_zero || !(*clamp_zero)[i])
            p.cell_node[static_cast<std::size_t>(i)] = nodes++;

    const int source = nodes;
    const int sink = nodes + 1;
    p.network = FlowNetwork(nodes + 2, source, sink);

    const auto scaled = [&](double v) {
        return static_cast<std::int64_t>(std::llround(v / p.quantum));
    };

    // Fold w*si*sj = w*si + |w|*si*(1-sj): the pair part becomes an arc
    // j -> i cut when j is empty and i holds ink. Both directions of each
    // unordered pair are present in the lists, so the arcs come out
    // symmetric and are added once per unordered pair.
    std::vector<std::int64_t> unary(static_cast<std::size_t>(cells), 0);
    for (CellIndex i = 0; i < cells; ++i)
        if (p.cell_node[static_cast<std::size_t>(i)] >= 0)
            unary[static_cast<std::size_t>(i)] = scaled(model.d1[static_cast<std::size_t>(i)]);

    const std::int64_t w1 = scaled(model.v1);
    const std::int64_t w2 = scaled(model.v2);
    const auto add_pairs =
        [&](const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
            std::int64_t w) {
            if (w == 0) return;
            for (const auto& [i, j] : pairs) {
                const int ni = p.cell_node[static_cast<std::size_t>(i)];
                const int nj = p.cell_node[static_cast<std::size_t>(j)];
                if (ni < 0 || nj < 0) continue;
                unary[static_cast<std::size_t>(i)] += w;
                if (i < j) p.network.add_edge(ni, nj, -w, -w);
            }
        };
    add_pairs(model.n1_pairs, w1);
    add_pairs(model.n2_pairs, w2);

    for (CellIndex i = 0; i < cells; ++i) {
        const int ni = p.cell_node[static_cast<std::size_t>(i)];
        if (ni < 0) continue;
        const std::int64_t u = unary[static_cast<std::size_t>(i)];
        if (u > 0) {
            p.network.add_edge(source, ni, u, 0);
        } else if (u < 0) {
            p.network.add_edge(ni, sink, -u, 0);
            p.reparam_units += -u;
        }
    }
    return p;
}

struct CutResult {
    double cut_value = 0.0;  // min cut in energy units
    BinaryField labeling{Grid{1, 1, 1, 0, 1.0}};
};

/// Exact min cut; sigma_i = 1 for sink-side cells. Ties between equal-value
/// cuts resolve toward label 0 (maximal source side).
inline CutResult max_flow(CutProblem& problem) {
    const std::int64_t flow = problem.network.max_flow();
    const std::vector<char> sink_side = problem.network.sink_side();
    CutResult r;
    r.cut_value = static_cast<double>(flow) * problem.quantum;
    r.labeling = BinaryField(problem.grid);
    for (CellIndex i = 0; i < problem.grid.cell_count(); ++i) {
        const int node = problem.cell_node[static_cast<std::size_t>(i)];
        if (node >= 0 && sink_side[static_cast<std::size_t>(node)])
            r.labeling.set(i, true);
    }
    return r;
}

struct InfiniteVolumeSolution {
    BinaryField sigma{Grid{1, 1, 1, 0, 1.0}};
    EnergyBreakdown breakdown;
};

/// Global minimizer of the interaction energy for the infinite-volume case
/// (lambda = 0). Ink is restricted to pore cells.
inline InfiniteVolumeSolution solve_infinite(const BinaryField& phi,
                                             const EnergyParams& params,
                                             const Grid& grid) {
    const PairwiseModel model = pairwise_model(phi, params, grid);
    CutProblem problem = build_network(model, &phi);
    CutResult cut = max_flow(problem);
    InfiniteVolumeSolution s;
    s.breakdown = energy_direct(cut.labeling, phi, params, grid);
    s.sigma = std::move(cut.labeling);
    return s;
}

} // namespace inkseep
