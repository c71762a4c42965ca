#pragma once
#include <cstdint>
#include <numeric>
#include <vector>

namespace percolab {

// Disjoint-set forest, union by rank with path halving.
class UnionFind {
public:
    explicit UnionFind(uint32_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    uint32_t find(uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

    uint32_t size() const { return static_cast<uint32_t>(parent_.size()); }

    void reset() {
        std::iota(parent_.begin(), parent_.end(), 0u);
        std::fill(rank_.begin(), rank_.end(), uint8_t{0});
    }

private:
    std::vector<uint32_t> parent_;
    std::vector<uint8_t> rank_;
};

} // namespace percolab
