#include "percolab/vertex.hpp"

#include <sstream>

#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

constexpr uint8_t TagTree = 0x00;
constexpr uint8_t TagLattice = 0x01;
constexpr uint8_t TagPlain = 0x02;
constexpr uint8_t TagProduct = 0x03;

void put_varint(std::string& out, uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

uint64_t zigzag(int64_t v) {
    return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
}

int64_t unzigzag(uint64_t v) {
    return static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1);
}

uint64_t get_varint(std::string_view bytes, size_t& pos) {
    uint64_t v = 0;
    int shift = 0;
    while (true) {
        if (pos >= bytes.size()) throw DecodeError("truncated varint");
        if (shift > 63) throw DecodeError("varint overflow");
        uint8_t b = static_cast<uint8_t>(bytes[pos++]);
        v |= static_cast<uint64_t>(b & 0x7f) << shift;
        if (!(b & 0x80)) return v;
        shift += 7;
    }
}

constexpr size_t MaxVectorLen = 1 << 20;

} // namespace

VertexId VertexId::tree(std::vector<uint32_t> w) {
    VertexId v;
    v.kind = Kind::TreeNode;
    v.word = std::move(w);
    return v;
}

VertexId VertexId::lattice_point(std::vector<uint32_t> owner, std::vector<int64_t> c) {
    VertexId v;
    v.kind = Kind::LatticePoint;
    v.word = std::move(owner);
    v.coords = std::move(c);
    return v;
}

VertexId VertexId::plain(std::vector<int64_t> c) {
    VertexId v;
    v.kind = Kind::Plain;
    v.coords = std::move(c);
    return v;
}

VertexId VertexId::with_line(int64_t zz) const {
    VertexId v = *this;
    v.onLine = true;
    v.z = zz;
    return v;
}

VertexId VertexId::base() const {
    VertexId v = *this;
    v.onLine = false;
    v.z = 0;
    return v;
}

void VertexId::encode_to(std::string& out) const {
    if (onLine) out.push_back(static_cast<char>(TagProduct));
    switch (kind) {
        case Kind::TreeNode:
            out.push_back(static_cast<char>(TagTree));
            put_varint(out, word.size());
            for (uint32_t c : word) put_varint(out, c);
            break;
        case Kind::LatticePoint:
            out.push_back(static_cast<char>(TagLattice));
            put_varint(out, word.size());
            for (uint32_t c : word) put_varint(out, c);
            put_varint(out, coords.size());
            for (int64_t c : coords) put_varint(out, zigzag(c));
            break;
        case Kind::Plain:
            out.push_back(static_cast<char>(TagPlain));
            put_varint(out, coords.size());
            for (int64_t c : coords) put_varint(out, zigzag(c));
            break;
    }
    if (onLine) put_varint(out, zigzag(z));
}

std::string VertexId::encode() const {
    std::string out;
    out.reserve(2 + 2 * word.size() + 2 * coords.size());
    encode_to(out);
    return out;
}

VertexId VertexId::decode_prefix(std::string_view bytes, size_t& pos) {
    if (pos >= bytes.size()) throw DecodeError("empty encoding");
    uint8_t tag = static_cast<uint8_t>(bytes[pos++]);
    bool product = false;
    if (tag == TagProduct) {
        product = true;
        if (pos >= bytes.size()) throw DecodeError("truncated product encoding");
        tag = static_cast<uint8_t>(bytes[pos++]);
        if (tag == TagProduct) throw DecodeError("nested product encoding");
    }
    VertexId v;
    switch (tag) {
        case TagTree: {
            v.kind = Kind::TreeNode;
            uint64_t n = get_varint(bytes, pos);
            if (n > MaxVectorLen) throw DecodeError("word too long");
            v.word.reserve(n);
            for (uint64_t i = 0; i < n; ++i) {
                uint64_t c = get_varint(bytes, pos);
                if (c > UINT32_MAX) throw DecodeError("child index overflow");
                v.word.push_back(static_cast<uint32_t>(c));
            }
            break;
        }
        case TagLattice: {
            v.kind = Kind::LatticePoint;
            uint64_t n = get_varint(bytes, pos);
            if (n > MaxVectorLen) throw DecodeError("word too long");
            v.word.reserve(n);
            for (uint64_t i = 0; i < n; ++i) {
                uint64_t c = get_varint(bytes, pos);
                if (c > UINT32_MAX) throw DecodeError("child index overflow");
                v.word.push_back(static_cast<uint32_t>(c));
            }
            uint64_t d = get_varint(bytes, pos);
            if (d > MaxVectorLen) throw DecodeError("coords too long");
            v.coords.reserve(d);
            for (uint64_t i = 0; i < d; ++i) v.coords.push_back(unzigzag(get_varint(bytes, pos)));
            break;
        }
        case TagPlain: {
            v.kind = Kind::Plain;
            uint64_t d = get_varint(bytes, pos);
            if (d > MaxVectorLen) throw DecodeError("coords too long");
            v.coords.reserve(d);
            for (uint64_t i = 0; i < d; ++i) v.coords.push_back(unzigzag(get_varint(bytes, pos)));
            break;
        }
        default:
            throw DecodeError("unknown tag byte");
    }
    if (product) {
        v.onLine = true;
        v.z = unzigzag(get_varint(bytes, pos));
    }
    return v;
}

VertexId VertexId::decode(std::string_view bytes) {
    size_t pos = 0;
    VertexId v = decode_prefix(bytes, pos);
    if (pos != bytes.size()) throw DecodeError("trailing bytes after encoding");
    return v;
}

std::string VertexId::display() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::TreeNode:
            os << "t:";
            for (size_t i = 0; i < word.size(); ++i) os << (i ? "." : "") << word[i];
            if (word.empty()) os << "root";
            break;
        case Kind::LatticePoint:
            os << "c:";
            for (size_t i = 0; i < word.size(); ++i) os << (i ? "." : "") << word[i];
            os << ":(";
            for (size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
            os << ")";
            break;
        case Kind::Plain:
            os << "(";
            for (size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
            os << ")";
            break;
    }
    if (onLine) os << "@" << z;
    return os.str();
}

bool vertex_less(const VertexId& a, const VertexId& b) { return a.encode() < b.encode(); }

uint64_t vertex_hash(const VertexId& v) {
    uint64_t h = mix64(static_cast<uint64_t>(v.kind) | (v.onLine ? 0x100 : 0));
    for (uint32_t c : v.word) h = mix64(h ^ c);
    h = mix64(h ^ 0x77ULL);
    for (int64_t c : v.coords) h = mix64(h ^ static_cast<uint64_t>(c));
    if (v.onLine) h = mix64(h ^ static_cast<uint64_t>(v.z));
    return h;
}

} // namespace percolab
