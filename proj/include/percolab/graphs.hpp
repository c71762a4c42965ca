#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "percolab/graph_spec.hpp"
#include "percolab/vertex.hpp"

namespace percolab {

constexpr uint64_t kDefaultTruncationCap = 4'000'000;

// Insertion level schedule: l_1 = 1, l_{n+1} = l_n + ceil(d^2 * log(n+1)),
// natural log.
std::vector<int64_t> level_sequence(int d, int nMax);

// Index n with l_n == level and n >= n0, or 0 when the level is plain.
int insertion_index(const GraphSpec& spec, int level);

// Throws InvalidVertexError unless v addresses a vertex of spec.
void validate_vertex(const GraphSpec& spec, const VertexId& v);

// Exact adjacency list; symmetric by construction.
std::vector<VertexId> neighbors(const GraphSpec& spec, const VertexId& v);

// Explicit finite window of an infinite graph.  Vertices are sorted by
// canonical encoding, edges are the full induced edge set, boundary
// vertices are those with a neighbor outside the window.
struct FiniteTruncation {
    GraphSpec spec;
    int radius = 0;
    std::vector<VertexId> verts;
    std::vector<std::string> enc;   // cached encodings, aligned with verts
    std::vector<uint16_t> dist;     // BFS distance from the source set
    std::vector<uint8_t> boundary;  // 1 when the vertex has an outside neighbor
    std::vector<std::pair<uint32_t, uint32_t>> edges; // u < v, sorted

    // CSR adjacency over edge indices: adj[k] = (neighbor, edgeIndex).
    std::vector<uint32_t> adjStart;
    std::vector<std::pair<uint32_t, uint32_t>> adj;

    size_t vertex_count() const { return verts.size(); }
    size_t edge_count() const { return edges.size(); }
    // Index of v, or -1 when absent.
    int64_t index_of(const VertexId& v) const;
    int64_t index_of_encoded(const std::string& e) const;

    std::string to_edge_list() const; // hex pairs, header with spec + radius
};

using VertexPredicate = std::function<bool(const VertexId&)>;

FiniteTruncation ball(const GraphSpec& spec, const VertexId& center, int r,
                      uint64_t cap = kDefaultTruncationCap);
FiniteTruncation ball_multi(const GraphSpec& spec, const std::vector<VertexId>& sources, int r,
                            uint64_t cap = kDefaultTruncationCap);
FiniteTruncation ball_filtered(const GraphSpec& spec, const VertexId& center, int r,
                               const VertexPredicate& keep,
                               uint64_t cap = kDefaultTruncationCap);

} // namespace percolab
