#include "percolab/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

#include "percolab/errors.hpp"
#include "percolab/replica.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

struct MeanAcc {
    // Exact integer accumulation so aggregation is order-free.
    uint64_t sum = 0;
    uint64_t sumSq = 0;
    void add(uint64_t c) {
        sum += c;
        sumSq += c * c;
    }
    double mean(uint64_t n) const { return n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0; }
    double stderr_(uint64_t n) const {
        if (n < 2) return 0.0;
        double m = mean(n);
        double var = (static_cast<double>(sumSq) - static_cast<double>(n) * m * m) /
                     static_cast<double>(n - 1);
        if (var < 0) var = 0;
        return std::sqrt(var / static_cast<double>(n));
    }
};

// ---- materialized path -------------------------------------------------

uint32_t count_linking_clusters(const FiniteTruncation& trunc, const PercolationSample& s,
                                int innerRadius) {
    UnionFind uf(static_cast<uint32_t>(trunc.vertex_count()));
    for (size_t e = 0; e < trunc.edge_count(); ++e)
        if (s.open(e)) uf.unite(trunc.edges[e].first, trunc.edges[e].second);
    std::vector<uint8_t> inner(trunc.vertex_count(), 0), outer(trunc.vertex_count(), 0);
    for (uint32_t v = 0; v < trunc.vertex_count(); ++v) {
        uint32_t r = uf.find(v);
        if (trunc.dist[v] <= innerRadius) inner[r] = 1;
        if (trunc.boundary[v]) outer[r] = 1;
    }
    uint32_t count = 0;
    for (uint32_t v = 0; v < trunc.vertex_count(); ++v)
        if (uf.find(v) == v && inner[v] && outer[v]) ++count;
    return count;
}

// ---- lazy path for Product(RegularTree(k)) -----------------------------
//
// Ball(R) of T_k x Z is far too large to materialize for the radii the
// experiments use, but the union of clusters meeting the inner ball is
// not.  Vertices pack into a u64 (word chars 4 bits each, length 4 bits,
// line offset 7 bits), edge states are counter-based hashes of the
// canonical endpoint pair, so revisits are consistent without storage.

struct PackedTreeLine {
    int degree;
    int maxDepth; // <= 12
    int maxZ;     // |z| <= 63

    static constexpr int kMaxDepth = 12;

    uint64_t pack(const uint32_t* word, int len, int64_t z) const {
        uint64_t w = 0;
        for (int i = 0; i < len; ++i) w |= static_cast<uint64_t>(word[i] & 0xf) << (4 * i);
        return (w << 11) | (static_cast<uint64_t>(len) << 7) |
               static_cast<uint64_t>(z + 64);
    }
    static int len_of(uint64_t v) { return static_cast<int>((v >> 7) & 0xf); }
    static int64_t z_of(uint64_t v) { return static_cast<int64_t>(v & 0x7f) - 64; }
    static uint64_t word_bits(uint64_t v) { return v >> 11; }
    static int dist(uint64_t v) {
        int64_t z = z_of(v);
        return len_of(v) + static_cast<int>(z < 0 ? -z : z);
    }

    int append_neighbors(uint64_t v, uint64_t* out) const {
        int n = 0;
        int len = len_of(v);
        int64_t z = z_of(v);
        uint64_t w = word_bits(v);
        // line steps
        out[n++] = pack_raw(w, len, z + 1);
        out[n++] = pack_raw(w, len, z - 1);
        // parent
        if (len > 0) out[n++] = pack_raw(w & ~(uint64_t{0xf} << (4 * (len - 1))), len - 1, z);
        // children
        if (len < maxDepth) {
            int children = (len == 0) ? degree : degree - 1;
            for (int i = 0; i < children; ++i)
                out[n++] = pack_raw(w | (static_cast<uint64_t>(i) << (4 * len)), len + 1, z);
        }
        return n;
    }

    static uint64_t pack_raw(uint64_t wordBits, int len, int64_t z) {
        return (wordBits << 11) | (static_cast<uint64_t>(len) << 7) |
               static_cast<uint64_t>(z + 64);
    }
};

// Open-addressing map u64 -> u32 sized for tens of millions of entries.
class FlatMap64 {
public:
    explicit FlatMap64(size_t initial = 1 << 16) { rehash(initial); }

    // Returns pointer to value slot; sets `inserted`.
    uint32_t* insert(uint64_t key, uint32_t value, bool& inserted) {
        if (count_ + 1 > capacity_ - (capacity_ >> 2)) rehash(capacity_ * 2);
        size_t i = probe(key);
        if (keys_[i] == key) {
            inserted = false;
            return &vals_[i];
        }
        keys_[i] = key;
        vals_[i] = value;
        ++count_;
        inserted = true;
        return &vals_[i];
    }

    size_t size() const { return count_; }

private:
    std::vector<uint64_t> keys_;
    std::vector<uint32_t> vals_;
    size_t capacity_ = 0;
    size_t count_ = 0;

    size_t probe(uint64_t key) const {
        size_t mask = capacity_ - 1;
        size_t i = static_cast<size_t>(mix64(key)) & mask;
        while (keys_[i] != 0 && keys_[i] != key) i = (i + 1) & mask;
        return i;
    }

    void rehash(size_t cap) {
        std::vector<uint64_t> ok = std::move(keys_);
        std::vector<uint32_t> ov = std::move(vals_);
        capacity_ = cap;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        count_ = 0;
        for (size_t i = 0; i < ok.size(); ++i) {
            if (ok[i] != 0) {
                bool ins;
                *insert(ok[i], ov[i], ins) = ov[i];
            }
        }
    }
};

struct LazyDsu {
    std::vector<uint32_t> parent;
    std::vector<uint8_t> reachedBoundary;
    explicit LazyDsu(uint32_t n) : parent(n), reachedBoundary(n, 0) {
        for (uint32_t i = 0; i < n; ++i) parent[i] = i;
    }
    uint32_t find(uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        reachedBoundary[a] |= reachedBoundary[b];
    }
};

uint32_t lazy_tree_line_count(const PackedTreeLine& g, const std::vector<uint64_t>& inner,
                              int R, double p, uint64_t seed, uint64_t replica,
                              uint64_t exploredCap) {
    LazyDsu dsu(static_cast<uint32_t>(inner.size()));
    FlatMap64 owner;
    std::deque<std::pair<uint64_t, uint32_t>> queue;
    for (uint32_t i = 0; i < inner.size(); ++i) {
        bool ins;
        uint32_t* slot = owner.insert(inner[i], i, ins);
        if (!ins) {
            // duplicate source cannot happen; inner vertices are distinct
            (void)slot;
        }
        queue.emplace_back(inner[i], i);
    }
    const uint64_t edgeSalt = mix64(stream::Lazy ^ replica);
    uint64_t buf[20];
    while (!queue.empty()) {
        auto [v, src] = queue.front();
        queue.pop_front();
        int nn = g.append_neighbors(v, buf);
        for (int k = 0; k < nn; ++k) {
            uint64_t u = buf[k];
            if (PackedTreeLine::dist(u) > R) continue;
            uint64_t lo = v < u ? v : u;
            uint64_t hi = v < u ? u : v;
            if (to_unit(hash_key(seed, edgeSalt, lo, hi)) >= p) continue;
            bool ins;
            uint32_t* slot = owner.insert(u, src, ins);
            if (!ins) {
                dsu.unite(src, *slot);
                continue;
            }
            if (owner.size() > exploredCap)
                throw CapExceededError("lazy cluster exploration exceeds cap", owner.size());
            if (PackedTreeLine::dist(u) == R) dsu.reachedBoundary[dsu.find(src)] = 1;
            queue.emplace_back(u, src);
        }
    }
    std::set<uint32_t> roots;
    for (uint32_t i = 0; i < inner.size(); ++i) {
        uint32_t r = dsu.find(i);
        if (dsu.reachedBoundary[r]) roots.insert(r);
    }
    return static_cast<uint32_t>(roots.size());
}

double tree_line_ball_size(int degree, int R) {
    // |B_T(r)| = 1 + k((k-1)^r - 1)/(k-2); product ball sums over |z|.
    auto treeBall = [&](int r) {
        double s = 1;
        double shell = degree;
        for (int i = 1; i <= r; ++i) {
            s += shell;
            shell *= degree - 1;
        }
        return s;
    };
    double total = treeBall(R);
    for (int z = 1; z <= R; ++z) total += 2 * treeBall(R - z);
    return total;
}

} // namespace

TrichotomyReport boundary_cluster_count(const GraphSpec& spec, int r, int R, double p,
                                        uint64_t replicas, uint64_t seed, int threads,
                                        ExploreLimits limits) {
    if (!(0 < r && r < R)) throw SpecError("boundary_cluster_count needs 0 < r < R");
    if (p < 0 || p > 1) throw SpecError("p must be in [0,1]");
    spec.validate();

    TrichotomyReport rep;
    rep.spec = spec;
    rep.p = p;
    rep.innerRadius = r;
    rep.outerRadius = R;
    rep.replicas = replicas;
    rep.seed = seed;

    const bool treeLine = spec.kind == GraphKind::RegularTree && spec.product;
    const bool lazy = treeLine && tree_line_ball_size(spec.degree, R) >
                                      static_cast<double>(limits.materializeCap);

    std::vector<uint32_t> counts(replicas, 0);
    if (!lazy) {
        VertexId center;
        switch (spec.kind) {
            case GraphKind::Lattice:
                center = VertexId::plain(std::vector<int64_t>(spec.d, 0));
                break;
            case GraphKind::LatticeJoinTree:
                center = VertexId::plain(std::vector<int64_t>(spec.latticeDim, 0));
                break;
            default:
                center = VertexId::tree({});
                break;
        }
        if (spec.product) center = center.with_line(0);
        FiniteTruncation trunc = ball(spec, center, R, limits.materializeCap);
        run_replicas(replicas, threads, [&](uint64_t k) {
            PercolationSample s = sample_bonds(trunc, p, seed, k);
            counts[k] = count_linking_clusters(trunc, s, r);
        });
    } else {
        rep.lazyExploration = true;
        if (spec.degree > 15) throw SpecError("lazy exploration supports tree degree <= 15");
        if (R > 60) throw SpecError("lazy exploration supports R <= 60");
        PackedTreeLine g{spec.degree, PackedTreeLine::kMaxDepth, 63};
        if (R > PackedTreeLine::kMaxDepth)
            throw SpecError("lazy exploration supports R <= 12");
        // inner ball, deterministic order
        std::vector<uint64_t> inner;
        {
            std::deque<uint64_t> q;
            std::unordered_set<uint64_t> seen;
            uint64_t root = PackedTreeLine::pack_raw(0, 0, 0);
            q.push_back(root);
            seen.insert(root);
            uint64_t buf[20];
            while (!q.empty()) {
                uint64_t v = q.front();
                q.pop_front();
                inner.push_back(v);
                if (PackedTreeLine::dist(v) == r) continue;
                int nn = g.append_neighbors(v, buf);
                for (int k = 0; k < nn; ++k) {
                    uint64_t u = buf[k];
                    if (PackedTreeLine::dist(u) > r) continue;
                    if (seen.insert(u).second) q.push_back(u);
                }
            }
            std::sort(inner.begin(), inner.end());
        }
        run_replicas(replicas, threads, [&](uint64_t k) {
            counts[k] = lazy_tree_line_count(g, inner, R, p, seed, k, limits.exploredCap);
        });
    }

    MeanAcc acc;
    for (uint32_t c : counts) {
        acc.add(c);
        ++rep.countDistribution[c];
    }
    rep.meanCount = acc.mean(replicas);
    rep.stderr_ = acc.stderr_(replicas);
    return rep;
}

uint32_t trifurcation_count(const ClusterLabeling& label, const std::vector<VertexId>& window) {
    const PercolationSample& sample = *label.sample;
    const FiniteTruncation& trunc = *sample.trunc;
    const uint32_t n = static_cast<uint32_t>(trunc.vertex_count());

    // cluster member lists
    std::vector<std::vector<uint32_t>> members(n);
    for (uint32_t v = 0; v < n; ++v) members[label.root[v]].push_back(v);

    std::vector<int32_t> local(n, -1);
    uint32_t count = 0;
    for (const VertexId& w : window) {
        int64_t idx = trunc.index_of(w);
        if (idx < 0) throw InvalidVertexError("window vertex not in truncation");
        uint32_t v = static_cast<uint32_t>(idx);
        const auto& cluster = members[label.root[v]];
        if (cluster.size() < 4) continue; // needs >= 3 boundary parts after removal
        for (uint32_t i = 0; i < cluster.size(); ++i) local[cluster[i]] = static_cast<int32_t>(i);
        UnionFind uf(static_cast<uint32_t>(cluster.size()));
        for (uint32_t u : cluster) {
            if (u == v) continue;
            for (uint32_t a = trunc.adjStart[u]; a < trunc.adjStart[u + 1]; ++a) {
                auto [nb, e] = trunc.adj[a];
                if (nb == v || nb < u) continue;
                if (local[nb] < 0) continue;
                if (sample.open(e)) uf.unite(static_cast<uint32_t>(local[u]), static_cast<uint32_t>(local[nb]));
            }
        }
        std::set<uint32_t> boundaryParts;
        for (uint32_t u : cluster) {
            if (u == v || !trunc.boundary[u]) continue;
            boundaryParts.insert(uf.find(static_cast<uint32_t>(local[u])));
        }
        if (boundaryParts.size() >= 3) ++count;
        for (uint32_t u : cluster) local[u] = -1;
    }
    return count;
}

AnnulusReport annulus_escape_events(const GraphSpec& productSpec, const VertexId& baseVertex,
                                    double p, const std::vector<int>& radii, int L,
                                    uint64_t replicas, uint64_t seed, int threads, uint64_t cap) {
    if (!productSpec.product) throw SpecError("annulus events need a product spec");
    if (radii.empty()) throw SpecError("need at least one radius");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (radii[i] >= radii[i + 1]) throw SpecError("radii must be strictly increasing");
    if (radii.front() < 1) throw SpecError("radii must be >= 1");
    if (L < 1) throw SpecError("L must be >= 1");

    const GraphSpec baseSpec = productSpec.base();
    validate_vertex(baseSpec, baseVertex);
    const int R = radii.back();

    FiniteTruncation baseBall = ball(baseSpec, baseVertex, R, cap);
    VertexId center = baseVertex.with_line(0);
    FiniteTruncation trunc = ball(productSpec, center, R, cap);

    const uint32_t n = static_cast<uint32_t>(trunc.vertex_count());
    std::vector<uint16_t> baseDist(n);
    std::vector<int64_t> lineCoord(n);
    for (uint32_t v = 0; v < n; ++v) {
        int64_t bi = baseBall.index_of(trunc.verts[v].base());
        if (bi < 0) throw SpecError("product window vertex outside base window");
        baseDist[v] = baseBall.dist[static_cast<size_t>(bi)];
        lineCoord[v] = trunc.verts[v].z;
    }
    const uint32_t centerIdx = static_cast<uint32_t>(trunc.index_of(center));
    const size_t m = radii.size();

    std::vector<uint64_t> eCount(m > 0 ? m - 1 : 0, 0), fCount(m, 0);
    std::vector<std::vector<uint8_t>> eHit(replicas), fHit(replicas);

    run_replicas(replicas, threads, [&](uint64_t k) {
        PercolationSample s = sample_bonds(trunc, p, seed, k);
        // full-window connectivity for the E_i ladder
        UnionFind uf(n);
        for (size_t e = 0; e < trunc.edge_count(); ++e)
            if (s.open(e)) uf.unite(trunc.edges[e].first, trunc.edges[e].second);
        uint32_t rc = uf.find(centerIdx);
        int maxShell = 0; // highest shell index (1-based) reached
        for (uint32_t v = 0; v < n; ++v) {
            if (uf.find(v) != rc) continue;
            for (size_t i = m; i > 0; --i) {
                if (baseDist[v] == radii[i - 1]) {
                    maxShell = std::max(maxShell, static_cast<int>(i));
                    break;
                }
            }
        }
        std::vector<uint8_t> eh(m > 0 ? m - 1 : 0, 0);
        if (maxShell >= 1 && static_cast<size_t>(maxShell) < m) eh[maxShell - 1] = 1;
        eHit[k] = std::move(eh);

        // restricted connectivity for each F_i
        std::vector<uint8_t> fh(m, 0);
        for (size_t i = 0; i < m; ++i) {
            UnionFind ufr(n);
            for (size_t e = 0; e < trunc.edge_count(); ++e) {
                auto [a, b] = trunc.edges[e];
                if (baseDist[a] > radii[i] || baseDist[b] > radii[i]) continue;
                if (s.open(e)) ufr.unite(a, b);
            }
            uint32_t rr = ufr.find(centerIdx);
            std::set<int64_t> zs;
            for (uint32_t v = 0; v < n; ++v) {
                if (baseDist[v] == radii[i] && ufr.find(v) == rr) zs.insert(lineCoord[v]);
            }
            fh[i] = !zs.empty() && zs.size() <= static_cast<size_t>(L);
        }
        fHit[k] = std::move(fh);
    });

    for (uint64_t k = 0; k < replicas; ++k) {
        for (size_t i = 0; i + 1 < m; ++i) eCount[i] += eHit[k][i];
        for (size_t i = 0; i < m; ++i) fCount[i] += fHit[k][i];
    }

    AnnulusReport rep;
    rep.radii = radii;
    rep.L = L;
    rep.replicas = replicas;
    for (size_t i = 0; i + 1 < m; ++i) {
        rep.eFreq.push_back(static_cast<double>(eCount[i]) / static_cast<double>(replicas));
        rep.eFreqSum += rep.eFreq.back();
    }
    rep.fDecreasing = true;
    for (size_t i = 0; i < m; ++i) {
        rep.fFreq.push_back(static_cast<double>(fCount[i]) / static_cast<double>(replicas));
        if (i > 0 && rep.fFreq[i] > rep.fFreq[i - 1] + 1e-12) rep.fDecreasing = false;
    }
    return rep;
}

namespace {

std::set<std::pair<std::string, std::string>> canonical_edge_set(const EdgeList& edges) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : edges) {
        std::string ea = a.encode(), eb = b.encode();
        if (eb < ea) std::swap(ea, eb);
        out.emplace(std::move(ea), std::move(eb));
    }
    return out;
}

} // namespace

CutsetVerdict verify_cutset(const GraphSpec& spec, const std::vector<VertexId>& targetSet,
                            const EdgeList& cutEdges, int verifyRadius, uint64_t cap) {
    if (targetSet.empty()) throw SpecError("empty target set");
    FiniteTruncation trunc = ball_multi(spec, targetSet, verifyRadius, cap);
    auto removed = canonical_edge_set(cutEdges);

    std::vector<uint8_t> blocked(trunc.edge_count(), 0);
    for (size_t e = 0; e < trunc.edge_count(); ++e) {
        auto [u, v] = trunc.edges[e];
        std::pair<std::string, std::string> key{trunc.enc[u], trunc.enc[v]};
        if (key.second < key.first) std::swap(key.first, key.second);
        if (removed.count(key)) blocked[e] = 1;
    }

    std::deque<uint32_t> q;
    std::vector<uint8_t> seen(trunc.vertex_count(), 0);
    for (const auto& a : targetSet) {
        int64_t i = trunc.index_of(a);
        if (i < 0) throw InvalidVertexError("target vertex missing from window");
        if (!seen[static_cast<size_t>(i)]) {
            seen[static_cast<size_t>(i)] = 1;
            q.push_back(static_cast<uint32_t>(i));
        }
    }
    while (!q.empty()) {
        uint32_t v = q.front();
        q.pop_front();
        if (trunc.boundary[v]) return CutsetVerdict::Inconclusive;
        for (uint32_t a = trunc.adjStart[v]; a < trunc.adjStart[v + 1]; ++a) {
            auto [nb, e] = trunc.adj[a];
            if (blocked[e] || seen[nb]) continue;
            seen[nb] = 1;
            q.push_back(nb);
        }
    }
    return CutsetVerdict::Confined;
}

CutsetSearchResult find_bounded_cutset(const GraphSpec& spec, const std::vector<VertexId>& targetSet,
                                       int K, int searchRadius, uint64_t cap) {
    if (K < 1) throw SpecError("K must be >= 1");
    if (targetSet.empty()) throw SpecError("empty target set");
    FiniteTruncation trunc = ball_multi(spec, targetSet, searchRadius, cap);

    const uint32_t n = static_cast<uint32_t>(trunc.vertex_count());
    const uint32_t S = n, T = n + 1;
    MaxFlow mf(n + 2);
    for (size_t e = 0; e < trunc.edge_count(); ++e)
        mf.add_undirected(trunc.edges[e].first, trunc.edges[e].second);
    const int64_t inf = 1'000'000'000;
    for (const auto& a : targetSet) {
        int64_t i = trunc.index_of(a);
        if (i < 0) throw InvalidVertexError("target vertex missing from window");
        if (trunc.boundary[static_cast<size_t>(i)])
            throw SpecError("search radius does not separate the target set from the boundary");
        mf.add_arc(S, static_cast<uint32_t>(i), inf);
    }
    for (uint32_t v = 0; v < n; ++v)
        if (trunc.boundary[v]) mf.add_arc(v, T, inf);

    int64_t flow = mf.run(S, T);
    CutsetSearchResult res;
    res.minCut = static_cast<uint64_t>(flow);
    res.searchRadius = searchRadius;
    if (flow <= K) {
        auto side = mf.min_cut_side(S);
        CutsetCertificate cert;
        cert.targetSet = targetSet;
        cert.bound = K;
        for (size_t e = 0; e < trunc.edge_count(); ++e) {
            auto [u, v] = trunc.edges[e];
            if (side[u] != side[v])
                cert.cutEdges.emplace_back(trunc.verts[u], trunc.verts[v]);
        }
        res.certificate = std::move(cert);
    }
    return res;
}

} // namespace percolab
