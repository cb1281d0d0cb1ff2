#include "tcmfg/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "tcmfg/error.hpp"

namespace tcmfg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegligible = 1e-16;

struct Edge {
    std::size_t to;
    double cost;
    double capacity; // residual capacity
};

// Neighbour graph of the torus plus a hub node joined to every cell at cost 1.
class FlowNetwork {
public:
    explicit FlowNetwork(const GridSpec& grid) : nodes_(grid.size() + 1), adjacency_(nodes_) {
        const std::size_t hub = nodes_ - 1;
        const double h = grid.spacing();
        const Offset dirs[4] = {Offset{1, 0}, Offset{-1, 0}, Offset{0, 1}, Offset{0, -1}};
        const int count = grid.dim == 1 ? 2 : 4;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            for (int d = 0; d < count; ++d) add_arc(k, shift_index(k, dirs[d], grid), h);
            add_arc(k, hub, 1.0);
            add_arc(hub, k, 1.0);
        }
    }

    std::size_t size() const { return nodes_; }
    std::vector<std::size_t>& adjacent(std::size_t v) { return adjacency_[v]; }
    Edge& edge(std::size_t e) { return edges_[e]; }

private:
    void add_arc(std::size_t from, std::size_t to, double cost) {
        adjacency_[from].push_back(edges_.size());
        edges_.push_back({to, cost, kInf});
        adjacency_[to].push_back(edges_.size());
        edges_.push_back({from, -cost, 0.0});
    }

    std::size_t nodes_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<Edge> edges_;
};

void check_pair(const ProbabilityVector& mu, const ProbabilityVector& nu) {
    if (!(mu.grid() == nu.grid())) throw InvalidArgument("d0 requires measures on the same grid");
}

} // namespace

D0Result d0_solve(const ProbabilityVector& mu, const ProbabilityVector& nu) {
    check_pair(mu, nu);
    const GridSpec& grid = mu.grid();
    FlowNetwork net(grid);
    const std::size_t nodes = net.size();
    const std::size_t hub = nodes - 1;

    std::vector<double> supply(nodes, 0.0), demand(nodes, 0.0);
    double total_supply = 0.0, total_demand = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = mu[k] - nu[k];
        if (d > 0.0) supply[k] = d, total_supply += d;
        else if (d < 0.0) demand[k] = -d, total_demand += -d;
    }

    // Masses below this are round-off left over from the difference mu - nu.
    const double negligible = std::max(kNegligible, 1e-15 * std::max(total_supply, total_demand));
    D0Result result;
    std::vector<double> potential(nodes, 0.0), dist(nodes);
    std::vector<std::size_t> parent(nodes);
    std::vector<char> done(nodes);
    const std::size_t cap = 20 * nodes + 100;
    using Item = std::pair<double, std::size_t>;

    auto pending = [&](const std::vector<double>& v) {
        return std::any_of(v.begin(), v.end(), [&](double x) { return x > negligible; });
    };
    while (pending(supply) && pending(demand)) {
        if (result.augmentations >= cap)
            throw LpError("d0 flow did not finish after " + std::to_string(cap) + " augmentations; remaining supply " +
                          std::to_string(total_supply) + ", demand " + std::to_string(total_demand));
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(done.begin(), done.end(), 0);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (std::size_t v = 0; v < nodes; ++v) {
            if (supply[v] > negligible) {
                dist[v] = 0.0;
                parent[v] = SIZE_MAX;
                heap.push({0.0, v});
            }
        }
        std::size_t sink = SIZE_MAX;
        while (!heap.empty()) {
            auto [d, v] = heap.top();
            heap.pop();
            if (done[v] || d > dist[v]) continue;
            done[v] = 1;
            if (demand[v] > negligible) {
                sink = v;
                break;
            }
            for (std::size_t e : net.adjacent(v)) {
                const Edge& edge = net.edge(e);
                if (edge.capacity <= kNegligible) continue;
                const double reduced = std::max(0.0, edge.cost + potential[v] - potential[edge.to]);
                const double nd = d + reduced;
                if (nd < dist[edge.to]) {
                    dist[edge.to] = nd;
                    parent[edge.to] = e;
                    heap.push({nd, edge.to});
                }
            }
        }
        if (sink == SIZE_MAX)
            throw LpError("d0 flow found no augmenting path; remaining supply " + std::to_string(total_supply));
        const double reach = dist[sink];
        for (std::size_t v = 0; v < nodes; ++v) potential[v] += done[v] ? dist[v] : reach;

        // Walk back to the source, find the bottleneck, then push flow.
        double amount = demand[sink];
        double path_cost = 0.0;
        std::size_t v = sink;
        while (parent[v] != SIZE_MAX) {
            const Edge& edge = net.edge(parent[v]);
            amount = std::min(amount, edge.capacity);
            path_cost += edge.cost;
            v = net.edge(parent[v] ^ 1).to;
        }
        const std::size_t source = v;
        amount = std::min(amount, supply[source]);
        for (v = sink; parent[v] != SIZE_MAX; v = net.edge(parent[v] ^ 1).to) {
            net.edge(parent[v]).capacity -= amount;
            net.edge(parent[v] ^ 1).capacity += amount;
        }
        supply[source] -= amount;
        demand[sink] -= amount;
        total_supply -= amount;
        total_demand -= amount;
        result.value += amount * path_cost;
        ++result.augmentations;
    }

    result.potential.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) result.potential[k] = potential[hub] - potential[k];
    for (std::size_t k = 0; k < grid.size(); ++k) result.dual_value += (mu[k] - nu[k]) * result.potential[k];
    return result;
}

double d0_distance(const ProbabilityVector& mu, const ProbabilityVector& nu) { return d0_solve(mu, nu).value; }

double d0_distance_levels(const ProbabilityVector& mu, const ProbabilityVector& nu) {
    check_pair(mu, nu);
    const GridSpec& grid = mu.grid();
    if (grid.dim != 1) throw InvalidArgument("level dynamic program is one-dimensional");
    const double h = grid.spacing();
    const std::size_t n = grid.points;

    std::vector<double> levels;
    for (int j = 0; -1.0 + j * h <= 1.0 + 1e-12; ++j) {
        levels.push_back(-1.0 + j * h);
        levels.push_back(1.0 - j * h);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 levels.end());
    for (double& l : levels) l = std::clamp(l, -1.0, 1.0);
    const std::size_t count = levels.size();
    std::vector<std::size_t> lo(count), hi(count);
    for (std::size_t i = 0; i < count; ++i) {
        lo[i] = i;
        while (lo[i] > 0 && levels[i] - levels[lo[i] - 1] <= h + 1e-12) --lo[i];
        hi[i] = i;
        while (hi[i] + 1 < count && levels[hi[i] + 1] - levels[i] <= h + 1e-12) ++hi[i];
    }

    std::vector<double> delta(n);
    for (std::size_t k = 0; k < n; ++k) delta[k] = mu[k] - nu[k];
    double best = -kInf;
    std::vector<double> prev(count), next(count);
    for (std::size_t start = 0; start < count; ++start) {
        std::fill(prev.begin(), prev.end(), -kInf);
        prev[start] = delta[0] * levels[start];
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t i = 0; i < count; ++i) {
                double m = -kInf;
                for (std::size_t j = lo[i]; j <= hi[i]; ++j) m = std::max(m, prev[j]);
                next[i] = m == -kInf ? m : m + delta[k] * levels[i];
            }
            std::swap(prev, next);
        }
        for (std::size_t i = lo[start]; i <= hi[start]; ++i) best = std::max(best, prev[i]);
    }
    return best;
}

double d0_sup(const std::vector<ProbabilityVector>& a, const std::vector<ProbabilityVector>& b) {
    if (a.size() != b.size()) throw InvalidArgument("trajectories have different lengths");
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s = std::max(s, d0_distance(a[n], b[n]));
    return s;
}

} // namespace tcmfg
