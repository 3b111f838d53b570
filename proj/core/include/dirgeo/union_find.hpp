#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace dirgeo {

struct DisjointSet {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint8_t> rank;

    explicit DisjointSet(std::size_t n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    }
};

// Compressed adjacency: neighbors of cell i are neighbors[offsets[i] .. offsets[i+1]).
struct AdjacencyList {
    std::vector<std::uint32_t> offsets{0};
    std::vector<std::uint32_t> neighbors;

    std::size_t cell_count() const { return offsets.size() - 1; }

    void add_row(const std::vector<std::uint32_t>& row) {
        neighbors.insert(neighbors.end(), row.begin(), row.end());
        offsets.push_back(static_cast<std::uint32_t>(neighbors.size()));
    }
};

struct ComponentLabeling {
    int count = 0;
    // label in [0, count) for active cells, -1 for inactive
    std::vector<int> labels;
};

// Connected components of the subgraph induced by active cells. Labels are
// assigned in first-visit order, so the result is independent of how the
// adjacency rows were produced.
inline ComponentLabeling union_find_components(const AdjacencyList& adj,
                                               const std::vector<std::uint8_t>& active) {
    const std::size_t n = adj.cell_count();
    DisjointSet ds(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        for (std::uint32_t k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) {
            std::uint32_t j = adj.neighbors[k];
            if (j > i || !active[j]) continue;
            ds.unite(i, j);
        }
    }
    ComponentLabeling out;
    out.labels.assign(n, -1);
    std::vector<int> root_label(n, -1);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        std::uint32_t r = ds.find(i);
        if (root_label[r] < 0) root_label[r] = out.count++;
        out.labels[i] = root_label[r];
    }
    return out;
}

}  // namespace dirgeo
