#pragma once
#include <cstdint>
#include <vector>

namespace percolab {

// Dinic max-flow on small graphs.  Undirected unit-capacity edges are a
// pair of arcs with capacity 1 each sharing residuals.
class MaxFlow {
public:
    explicit MaxFlow(uint32_t n);

    // Returns the arc handle of u->v (the reverse arc is handle^1).
    uint32_t add_arc(uint32_t u, uint32_t v, int64_t cap, int64_t capRev = 0);
    void add_undirected(uint32_t u, uint32_t v) { add_arc(u, v, 1, 1); }

    int64_t run(uint32_t s, uint32_t t);

    // After run(): vertices reachable from s in the residual graph.
    std::vector<uint8_t> min_cut_side(uint32_t s) const;

private:
    struct Arc {
        uint32_t to;
        int64_t cap;
    };
    uint32_t n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<uint32_t>> out_;
    std::vector<int> level_;
    std::vector<uint32_t> iter_;

    bool bfs(uint32_t s, uint32_t t);
    int64_t dfs(uint32_t v, uint32_t t, int64_t f);
};

} // namespace percolab
