#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace percolab {

// Canonical address of a vertex in any of the graph families.
//
//   TreeNode      word of child indices from the root (level = word length)
//   LatticePoint  point of a private lattice copy hanging off a tree edge;
//                 `word` is the tree word of the edge's deeper endpoint.
//                 Also reused for stretched-edge interior vertices
//                 (coords = {1} or {2}) and ray vertices (word empty,
//                 coords = {k}).
//   Plain         point of a free-standing lattice
//
// A product vertex (v, z) is the base vertex with onLine set.
struct VertexId {
    enum class Kind : uint8_t { TreeNode = 0, LatticePoint = 1, Plain = 2 };

    Kind kind = Kind::Plain;
    bool onLine = false;
    int64_t z = 0;
    std::vector<uint32_t> word;
    std::vector<int64_t> coords;

    bool operator==(const VertexId&) const = default;

    int level() const { return static_cast<int>(word.size()); }

    static VertexId tree(std::vector<uint32_t> w);
    static VertexId lattice_point(std::vector<uint32_t> owner, std::vector<int64_t> c);
    static VertexId plain(std::vector<int64_t> c);

    VertexId with_line(int64_t zz) const;
    VertexId base() const;

    // Injective byte encoding: tag byte per variant, varint lengths,
    // zig-zag varints for signed coordinates.  decode(encode(v)) == v and
    // byte-lexicographic order on encodings is the canonical vertex order.
    void encode_to(std::string& out) const;
    std::string encode() const;
    static VertexId decode(std::string_view bytes); // throws DecodeError
    static VertexId decode_prefix(std::string_view bytes, size_t& pos);

    std::string display() const;
};

// Canonical order (byte-lexicographic on encodings).
bool vertex_less(const VertexId& a, const VertexId& b);

uint64_t vertex_hash(const VertexId& v);

} // namespace percolab
