#include "percolab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "percolab/errors.hpp"

namespace percolab {

std::vector<int64_t> level_sequence(int d, int nMax) {
    if (d < 1) throw SpecError("level_sequence: d must be >= 1");
    if (nMax < 1) throw SpecError("level_sequence: nMax must be >= 1");
    std::vector<int64_t> l;
    l.reserve(nMax);
    l.push_back(1);
    for (int n = 1; n < nMax; ++n) {
        double gap = std::ceil(static_cast<double>(d) * d * std::log(static_cast<double>(n) + 1.0));
        l.push_back(l.back() + static_cast<int64_t>(gap));
    }
    return l;
}

namespace {

// Levels up to at least `level`, memoized per dimension.
const std::vector<int64_t>& level_table(int d, int64_t level) {
    thread_local std::unordered_map<int, std::vector<int64_t>> cache;
    auto& tab = cache[d];
    if (tab.empty()) tab.push_back(1);
    while (tab.back() < level) {
        int n = static_cast<int>(tab.size());
        double gap = std::ceil(static_cast<double>(d) * d * std::log(static_cast<double>(n) + 1.0));
        tab.push_back(tab.back() + static_cast<int64_t>(gap));
    }
    return tab;
}

bool has_insertions(GraphKind k) {
    return k == GraphKind::TreeWithLatticeInsertions || k == GraphKind::StretchedTree;
}

std::vector<uint32_t> parent_word(const std::vector<uint32_t>& w) {
    return std::vector<uint32_t>(w.begin(), w.end() - 1);
}

std::vector<uint32_t> child_word(const std::vector<uint32_t>& w, uint32_t i) {
    std::vector<uint32_t> c = w;
    c.push_back(i);
    return c;
}

void check_tree_word(const GraphSpec& spec, const std::vector<uint32_t>& w) {
    int D = spec.tree_degree();
    for (size_t i = 0; i < w.size(); ++i) {
        uint32_t limit = (i == 0) ? static_cast<uint32_t>(D) : static_cast<uint32_t>(D - 1);
        if (w[i] >= limit) throw InvalidVertexError("tree child index out of range");
    }
}

} // namespace

int insertion_index(const GraphSpec& spec, int level) {
    if (!has_insertions(spec.kind) || level < 1) return 0;
    const auto& tab = level_table(spec.d, level);
    auto it = std::lower_bound(tab.begin(), tab.end(), static_cast<int64_t>(level));
    if (it == tab.end() || *it != level) return 0;
    int n = static_cast<int>(it - tab.begin()) + 1;
    return n >= spec.n0 ? n : 0;
}

void validate_vertex(const GraphSpec& spec, const VertexId& v) {
    spec.validate();
    if (v.onLine != spec.product) throw InvalidVertexError("product coordinate does not match spec");
    switch (spec.kind) {
        case GraphKind::Lattice:
            if (v.kind != VertexId::Kind::Plain) throw InvalidVertexError("lattice vertex must be plain");
            if (static_cast<int>(v.coords.size()) != spec.d)
                throw InvalidVertexError("lattice coordinate dimension mismatch");
            return;
        case GraphKind::RegularTree:
            if (v.kind != VertexId::Kind::TreeNode) throw InvalidVertexError("tree vertex expected");
            check_tree_word(spec, v.word);
            return;
        case GraphKind::TreePlusRay:
            if (v.kind == VertexId::Kind::TreeNode) {
                check_tree_word(spec, v.word);
                return;
            }
            if (v.kind == VertexId::Kind::LatticePoint) {
                if (!v.word.empty() || v.coords.size() != 1 || v.coords[0] < 1)
                    throw InvalidVertexError("malformed ray vertex");
                return;
            }
            throw InvalidVertexError("vertex kind not in tree-plus-ray");
        case GraphKind::LatticeJoinTree:
            if (v.kind == VertexId::Kind::TreeNode) {
                check_tree_word(spec, v.word);
                return;
            }
            if (v.kind == VertexId::Kind::Plain) {
                if (static_cast<int>(v.coords.size()) != spec.latticeDim)
                    throw InvalidVertexError("lattice coordinate dimension mismatch");
                return;
            }
            throw InvalidVertexError("vertex kind not in lattice-join-tree");
        case GraphKind::TreeWithLatticeInsertions:
        case GraphKind::StretchedTree: {
            if (v.kind == VertexId::Kind::TreeNode) {
                check_tree_word(spec, v.word);
                return;
            }
            if (v.kind != VertexId::Kind::LatticePoint)
                throw InvalidVertexError("vertex kind not in this graph");
            check_tree_word(spec, v.word);
            int n = insertion_index(spec, static_cast<int>(v.word.size()));
            if (n == 0) throw InvalidVertexError("owner word is not at an inserted level");
            if (spec.kind == GraphKind::TreeWithLatticeInsertions) {
                if (static_cast<int>(v.coords.size()) != spec.d)
                    throw InvalidVertexError("copy coordinate dimension mismatch");
            } else {
                if (v.coords.size() != 1 || (v.coords[0] != 1 && v.coords[0] != 2))
                    throw InvalidVertexError("stretched-edge vertex index must be 1 or 2");
            }
            return;
        }
    }
    throw InvalidVertexError("unknown graph kind");
}

namespace {

void base_neighbors(const GraphSpec& spec, const VertexId& v, std::vector<VertexId>& out) {
    switch (spec.kind) {
        case GraphKind::Lattice: {
            for (size_t i = 0; i < v.coords.size(); ++i) {
                for (int64_t s : {int64_t{1}, int64_t{-1}}) {
                    VertexId u = v;
                    u.coords[i] += s;
                    out.push_back(std::move(u));
                }
            }
            return;
        }
        case GraphKind::RegularTree: {
            int D = spec.degree;
            if (!v.word.empty()) out.push_back(VertexId::tree(parent_word(v.word)));
            int children = v.word.empty() ? D : D - 1;
            for (int i = 0; i < children; ++i)
                out.push_back(VertexId::tree(child_word(v.word, static_cast<uint32_t>(i))));
            return;
        }
        case GraphKind::TreePlusRay: {
            int D = spec.degree;
            if (v.kind == VertexId::Kind::TreeNode) {
                if (!v.word.empty()) out.push_back(VertexId::tree(parent_word(v.word)));
                int children = v.word.empty() ? D : D - 1;
                for (int i = 0; i < children; ++i)
                    out.push_back(VertexId::tree(child_word(v.word, static_cast<uint32_t>(i))));
                if (v.word.empty()) out.push_back(VertexId::lattice_point({}, {1}));
            } else {
                int64_t k = v.coords[0];
                if (k == 1) out.push_back(VertexId::tree({}));
                else out.push_back(VertexId::lattice_point({}, {k - 1}));
                out.push_back(VertexId::lattice_point({}, {k + 1}));
            }
            return;
        }
        case GraphKind::LatticeJoinTree: {
            if (v.kind == VertexId::Kind::Plain) {
                bool origin = true;
                for (int64_t c : v.coords)
                    if (c != 0) { origin = false; break; }
                for (size_t i = 0; i < v.coords.size(); ++i) {
                    for (int64_t s : {int64_t{1}, int64_t{-1}}) {
                        VertexId u = v;
                        u.coords[i] += s;
                        out.push_back(std::move(u));
                    }
                }
                if (origin) out.push_back(VertexId::tree({}));
            } else {
                int D = spec.treeDegree;
                if (!v.word.empty()) out.push_back(VertexId::tree(parent_word(v.word)));
                int children = v.word.empty() ? D : D - 1;
                for (int i = 0; i < children; ++i)
                    out.push_back(VertexId::tree(child_word(v.word, static_cast<uint32_t>(i))));
                if (v.word.empty()) out.push_back(VertexId::plain(std::vector<int64_t>(spec.latticeDim, 0)));
            }
            return;
        }
        case GraphKind::TreeWithLatticeInsertions: {
            int D = spec.tree_degree();
            if (v.kind == VertexId::Kind::TreeNode) {
                int L = v.level();
                if (L > 0) {
                    int n = insertion_index(spec, L);
                    if (n > 0) {
                        // Replaced parent edge: attach to (n,...,n) of the private copy.
                        out.push_back(VertexId::lattice_point(v.word, std::vector<int64_t>(spec.d, n)));
                    } else {
                        out.push_back(VertexId::tree(parent_word(v.word)));
                    }
                }
                int children = (L == 0) ? D : D - 1;
                int m = insertion_index(spec, L + 1);
                for (int i = 0; i < children; ++i) {
                    auto y = child_word(v.word, static_cast<uint32_t>(i));
                    if (m > 0) out.push_back(VertexId::lattice_point(std::move(y), std::vector<int64_t>(spec.d, 0)));
                    else out.push_back(VertexId::tree(std::move(y)));
                }
            } else {
                int n = insertion_index(spec, v.level());
                for (size_t i = 0; i < v.coords.size(); ++i) {
                    for (int64_t s : {int64_t{1}, int64_t{-1}}) {
                        VertexId u = v;
                        u.coords[i] += s;
                        out.push_back(std::move(u));
                    }
                }
                bool atOrigin = true, atDiag = true;
                for (int64_t c : v.coords) {
                    if (c != 0) atOrigin = false;
                    if (c != n) atDiag = false;
                }
                if (atOrigin) out.push_back(VertexId::tree(parent_word(v.word)));
                if (atDiag) out.push_back(VertexId::tree(v.word));
            }
            return;
        }
        case GraphKind::StretchedTree: {
            int D = spec.tree_degree();
            if (v.kind == VertexId::Kind::TreeNode) {
                int L = v.level();
                if (L > 0) {
                    if (insertion_index(spec, L) > 0)
                        out.push_back(VertexId::lattice_point(v.word, {2}));
                    else
                        out.push_back(VertexId::tree(parent_word(v.word)));
                }
                int children = (L == 0) ? D : D - 1;
                bool stretched = insertion_index(spec, L + 1) > 0;
                for (int i = 0; i < children; ++i) {
                    auto y = child_word(v.word, static_cast<uint32_t>(i));
                    if (stretched) out.push_back(VertexId::lattice_point(std::move(y), {1}));
                    else out.push_back(VertexId::tree(std::move(y)));
                }
            } else {
                if (v.coords[0] == 1) {
                    out.push_back(VertexId::tree(parent_word(v.word)));
                    out.push_back(VertexId::lattice_point(v.word, {2}));
                } else {
                    out.push_back(VertexId::lattice_point(v.word, {1}));
                    out.push_back(VertexId::tree(v.word));
                }
            }
            return;
        }
    }
    throw SpecError("unknown graph kind");
}

} // namespace

std::vector<VertexId> neighbors(const GraphSpec& spec, const VertexId& v) {
    validate_vertex(spec, v);
    std::vector<VertexId> out;
    if (spec.product) {
        VertexId b = v.base();
        base_neighbors(spec.base(), b, out);
        for (auto& u : out) {
            u.onLine = true;
            u.z = v.z;
        }
        VertexId up = v;
        up.z = v.z + 1;
        VertexId down = v;
        down.z = v.z - 1;
        out.push_back(std::move(up));
        out.push_back(std::move(down));
    } else {
        base_neighbors(spec, v, out);
    }
    return out;
}

int64_t FiniteTruncation::index_of_encoded(const std::string& e) const {
    auto it = std::lower_bound(enc.begin(), enc.end(), e);
    if (it == enc.end() || *it != e) return -1;
    return it - enc.begin();
}

int64_t FiniteTruncation::index_of(const VertexId& v) const { return index_of_encoded(v.encode()); }

std::string FiniteTruncation::to_edge_list() const {
    static const char* hex = "0123456789abcdef";
    auto hexify = [&](const std::string& s) {
        std::string h;
        h.reserve(2 * s.size());
        for (unsigned char c : s) {
            h.push_back(hex[c >> 4]);
            h.push_back(hex[c & 0xf]);
        }
        return h;
    };
    std::ostringstream os;
    os << "# percolab edge list spec=" << spec.display() << " radius=" << radius
       << " vertices=" << verts.size() << " edges=" << edges.size() << "\n";
    for (auto [u, v] : edges) os << hexify(enc[u]) << " " << hexify(enc[v]) << "\n";
    return os.str();
}

namespace {

FiniteTruncation build_truncation(const GraphSpec& spec, const std::vector<VertexId>& sources,
                                  int r, const VertexPredicate* keep, uint64_t cap) {
    spec.validate();
    if (r < 0) throw SpecError("radius must be >= 0");
    for (const auto& s : sources) validate_vertex(spec, s);

    struct Item {
        VertexId v;
        uint16_t dist;
    };
    std::unordered_map<std::string, uint32_t> index;
    std::vector<Item> items;
    std::deque<uint32_t> queue;

    auto push = [&](VertexId v, uint16_t dist) -> bool {
        std::string e = v.encode();
        auto [it, inserted] = index.try_emplace(std::move(e), static_cast<uint32_t>(items.size()));
        if (!inserted) return false;
        if (items.size() >= cap)
            throw CapExceededError("truncation exceeds vertex cap", items.size());
        items.push_back({std::move(v), dist});
        return true;
    };

    for (const auto& s : sources) {
        if (keep && !(*keep)(s)) continue;
        if (push(s, 0)) queue.push_back(static_cast<uint32_t>(items.size() - 1));
    }
    while (!queue.empty()) {
        uint32_t i = queue.front();
        queue.pop_front();
        uint16_t d = items[i].dist;
        if (d == r) continue;
        for (auto& u : neighbors(spec, items[i].v)) {
            if (keep && !(*keep)(u)) continue;
            if (push(std::move(u), static_cast<uint16_t>(d + 1)))
                queue.push_back(static_cast<uint32_t>(items.size() - 1));
        }
    }

    FiniteTruncation t;
    t.spec = spec;
    t.radius = r;
    const size_t n = items.size();
    std::vector<uint32_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<uint32_t>(i);
    std::vector<std::string> encs(n);
    for (size_t i = 0; i < n; ++i) encs[i] = items[i].v.encode();
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return encs[a] < encs[b]; });
    std::vector<uint32_t> rank(n);
    for (size_t i = 0; i < n; ++i) rank[order[i]] = static_cast<uint32_t>(i);

    t.verts.reserve(n);
    t.enc.reserve(n);
    t.dist.resize(n);
    t.boundary.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        t.verts.push_back(std::move(items[order[i]].v));
        t.enc.push_back(std::move(encs[order[i]]));
        t.dist[i] = items[order[i]].dist;
    }

    // Second pass: induced edges (including frontier-frontier edges the BFS
    // never traversed) and exact boundary flags.
    for (uint32_t i = 0; i < n; ++i) {
        for (auto& u : neighbors(spec, t.verts[i])) {
            if (keep && !(*keep)(u)) {
                t.boundary[i] = 1;
                continue;
            }
            std::string e = u.encode();
            auto it = index.find(e);
            if (it == index.end()) {
                t.boundary[i] = 1;
                continue;
            }
            uint32_t j = rank[it->second];
            if (i < j) t.edges.emplace_back(i, j);
        }
        if (t.dist[i] == r) t.boundary[i] = 1;
    }
    std::sort(t.edges.begin(), t.edges.end());

    t.adjStart.assign(n + 1, 0);
    for (auto [u, v] : t.edges) {
        ++t.adjStart[u + 1];
        ++t.adjStart[v + 1];
    }
    for (size_t i = 0; i < n; ++i) t.adjStart[i + 1] += t.adjStart[i];
    t.adj.resize(2 * t.edges.size());
    std::vector<uint32_t> fill(t.adjStart.begin(), t.adjStart.end() - 1);
    for (size_t e = 0; e < t.edges.size(); ++e) {
        auto [u, v] = t.edges[e];
        t.adj[fill[u]++] = {v, static_cast<uint32_t>(e)};
        t.adj[fill[v]++] = {u, static_cast<uint32_t>(e)};
    }
    return t;
}

} // namespace

FiniteTruncation ball(const GraphSpec& spec, const VertexId& center, int r, uint64_t cap) {
    return build_truncation(spec, {center}, r, nullptr, cap);
}

FiniteTruncation ball_multi(const GraphSpec& spec, const std::vector<VertexId>& sources, int r,
                            uint64_t cap) {
    if (sources.empty()) throw SpecError("ball_multi: empty source set");
    return build_truncation(spec, sources, r, nullptr, cap);
}

FiniteTruncation ball_filtered(const GraphSpec& spec, const VertexId& center, int r,
                               const VertexPredicate& keep, uint64_t cap) {
    return build_truncation(spec, {center}, r, &keep, cap);
}

} // namespace percolab
