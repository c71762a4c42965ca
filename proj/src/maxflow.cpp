#include "percolab/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace percolab {

MaxFlow::MaxFlow(uint32_t n) : n_(n), out_(n) {}

uint32_t MaxFlow::add_arc(uint32_t u, uint32_t v, int64_t cap, int64_t capRev) {
    uint32_t h = static_cast<uint32_t>(arcs_.size());
    arcs_.push_back({v, cap});
    arcs_.push_back({u, capRev});
    out_[u].push_back(h);
    out_[v].push_back(h + 1);
    return h;
}

bool MaxFlow::bfs(uint32_t s, uint32_t t) {
    level_.assign(n_, -1);
    std::deque<uint32_t> q{s};
    level_[s] = 0;
    while (!q.empty()) {
        uint32_t v = q.front();
        q.pop_front();
        for (uint32_t h : out_[v]) {
            const Arc& a = arcs_[h];
            if (a.cap > 0 && level_[a.to] < 0) {
                level_[a.to] = level_[v] + 1;
                q.push_back(a.to);
            }
        }
    }
    return level_[t] >= 0;
}

int64_t MaxFlow::dfs(uint32_t v, uint32_t t, int64_t f) {
    if (v == t) return f;
    for (uint32_t& i = iter_[v]; i < out_[v].size(); ++i) {
        uint32_t h = out_[v][i];
        Arc& a = arcs_[h];
        if (a.cap > 0 && level_[a.to] == level_[v] + 1) {
            int64_t d = dfs(a.to, t, std::min(f, a.cap));
            if (d > 0) {
                a.cap -= d;
                arcs_[h ^ 1].cap += d;
                return d;
            }
        }
    }
    return 0;
}

int64_t MaxFlow::run(uint32_t s, uint32_t t) {
    int64_t flow = 0;
    const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
    while (bfs(s, t)) {
        iter_.assign(n_, 0);
        while (int64_t f = dfs(s, t, inf)) flow += f;
    }
    return flow;
}

std::vector<uint8_t> MaxFlow::min_cut_side(uint32_t s) const {
    std::vector<uint8_t> side(n_, 0);
    std::deque<uint32_t> q{s};
    side[s] = 1;
    while (!q.empty()) {
        uint32_t v = q.front();
        q.pop_front();
        for (uint32_t h : out_[v]) {
            const Arc& a = arcs_[h];
            if (a.cap > 0 && !side[a.to]) {
                side[a.to] = 1;
                q.push_back(a.to);
            }
        }
    }
    return side;
}

} // namespace percolab
