#include "trapmodes/ldlt.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace trapmodes::eig {

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency full_adjacency(int n, const std::vector<int>& row_ptr, const std::vector<int>& col) {
    Adjacency adj(n);
    for (int i = 0; i < n; ++i)
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const int j = col[p];
            if (j == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    return adj;
}

// BFS level structure from root restricted to unvisited nodes of one component.
std::vector<std::vector<int>> levels_from(const Adjacency& adj, int root, std::vector<int>& mark, int stamp) {
    std::vector<std::vector<int>> levels{{root}};
    mark[root] = stamp;
    while (true) {
        std::vector<int> next;
        for (int v : levels.back())
            for (int w : adj[v])
                if (mark[w] != stamp) {
                    mark[w] = stamp;
                    next.push_back(w);
                }
        if (next.empty()) break;
        levels.push_back(std::move(next));
    }
    return levels;
}

int pseudo_peripheral(const Adjacency& adj, int start, std::vector<int>& mark, int& stamp) {
    int root = start;
    auto levels = levels_from(adj, root, mark, ++stamp);
    while (true) {
        const auto& last = levels.back();
        int candidate = *std::min_element(last.begin(), last.end(), [&](int a, int b) {
            return adj[a].size() < adj[b].size() || (adj[a].size() == adj[b].size() && a < b);
        });
        auto trial = levels_from(adj, candidate, mark, ++stamp);
        if (trial.size() <= levels.size()) return root;
        root = candidate;
        levels = std::move(trial);
    }
}

}  // namespace

std::vector<int> reverse_cuthill_mckee(int n, const std::vector<int>& row_ptr, const std::vector<int>& col) {
    const Adjacency adj = full_adjacency(n, row_ptr, col);
    std::vector<int> mark(n, 0);
    int stamp = 0;
    std::vector<char> placed(n, 0);
    std::vector<int> order;
    order.reserve(n);

    std::vector<int> by_degree(n);
    for (int i = 0; i < n; ++i) by_degree[i] = i;
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](int a, int b) { return adj[a].size() < adj[b].size(); });

    for (int seed : by_degree) {
        if (placed[seed]) continue;
        const int root = pseudo_peripheral(adj, seed, mark, stamp);
        std::queue<int> q;
        q.push(root);
        placed[root] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            order.push_back(v);
            std::vector<int> nbrs;
            for (int w : adj[v])
                if (!placed[w]) nbrs.push_back(w);
            std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
                return adj[a].size() < adj[b].size() || (adj[a].size() == adj[b].size() && a < b);
            });
            for (int w : nbrs) {
                placed[w] = 1;
                q.push(w);
            }
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

int bandwidth(int n, const std::vector<int>& row_ptr, const std::vector<int>& col, const std::vector<int>& perm) {
    std::vector<int> inv(n);
    for (int k = 0; k < n; ++k) inv[perm[k]] = k;
    int bw = 0;
    for (int i = 0; i < n; ++i)
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) bw = std::max(bw, std::abs(inv[i] - inv[col[p]]));
    return bw;
}

}  // namespace trapmodes::eig
