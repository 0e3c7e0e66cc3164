#pragma once

// Edmonds-Karp maximum flow with exact capacities. Small dense graphs only.

#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace amenlab::detail {

template <typename Cap>
class MaxFlow {
public:
    explicit MaxFlow(std::size_t nodes) : adj_(nodes) {}

    void add_edge(std::size_t from, std::size_t to, const Cap& cap) {
        adj_[from].push_back(edges_.size());
        edges_.push_back({to, cap});
        adj_[to].push_back(edges_.size());
        edges_.push_back({from, Cap(0)});
    }

    Cap run(std::size_t source, std::size_t sink) {
        Cap total(0);
        const std::size_t none = std::numeric_limits<std::size_t>::max();
        for (;;) {
            std::vector<std::size_t> via(adj_.size(), none);
            std::queue<std::size_t> q;
            q.push(source);
            std::vector<bool> seen(adj_.size(), false);
            seen[source] = true;
            while (!q.empty() && !seen[sink]) {
                const std::size_t u = q.front();
                q.pop();
                for (std::size_t e : adj_[u]) {
                    const auto& edge = edges_[e];
                    if (!seen[edge.to] && edge.cap > 0) {
                        seen[edge.to] = true;
                        via[edge.to] = e;
                        q.push(edge.to);
                    }
                }
            }
            if (!seen[sink]) return total;
            Cap push = edges_[via[sink]].cap;
            for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
                if (edges_[via[v]].cap < push) push = edges_[via[v]].cap;
            }
            for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
                edges_[via[v]].cap -= push;
                edges_[via[v] ^ 1].cap += push;
            }
            total += push;
        }
    }

private:
    struct Edge {
        std::size_t to;
        Cap cap;
    };
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Edge> edges_;
};

}  // namespace amenlab::detail
