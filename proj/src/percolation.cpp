#include "percolab/percolation.hpp"

#include <cmath>

#include "percolab/errors.hpp"
#include "percolab/replica.hpp"
#include "percolab/rng.hpp"

namespace percolab {

size_t PercolationSample::open_count() const {
    size_t n = 0;
    for (uint64_t w : bits) n += static_cast<size_t>(__builtin_popcountll(w));
    return n;
}

PercolationSample sample_bonds(const FiniteTruncation& trunc, double p, uint64_t seed,
                               uint64_t replicaIndex) {
    if (p < 0.0 || p > 1.0) throw SpecError("p must be in [0,1]");
    PercolationSample s;
    s.trunc = &trunc;
    s.p = p;
    s.seed = seed;
    s.replicaIndex = replicaIndex;
    const size_t m = trunc.edge_count();
    s.bits.assign((m + 63) / 64, 0);
    for (size_t e = 0; e < m; ++e) {
        if (unit_draw(seed, stream::Bonds, replicaIndex, e) < p)
            s.bits[e >> 6] |= uint64_t{1} << (e & 63);
    }
    return s;
}

std::vector<double> sample_edge_uniforms(const FiniteTruncation& trunc, uint64_t seed,
                                         uint64_t replicaIndex) {
    std::vector<double> u(trunc.edge_count());
    for (size_t e = 0; e < u.size(); ++e) u[e] = unit_draw(seed, stream::Bonds, replicaIndex, e);
    return u;
}

PercolationSample sample_from_uniforms(const FiniteTruncation& trunc,
                                       const std::vector<double>& uniforms, double p,
                                       uint64_t seed, uint64_t replicaIndex) {
    PercolationSample s;
    s.trunc = &trunc;
    s.p = p;
    s.seed = seed;
    s.replicaIndex = replicaIndex;
    s.bits.assign((uniforms.size() + 63) / 64, 0);
    for (size_t e = 0; e < uniforms.size(); ++e) {
        if (uniforms[e] < p) s.bits[e >> 6] |= uint64_t{1} << (e & 63);
    }
    return s;
}

ClusterLabeling clusters(const PercolationSample& sample) {
    const FiniteTruncation& t = *sample.trunc;
    UnionFind uf(static_cast<uint32_t>(t.vertex_count()));
    for (size_t e = 0; e < t.edge_count(); ++e) {
        if (sample.open(e)) uf.unite(t.edges[e].first, t.edges[e].second);
    }
    ClusterLabeling lab;
    lab.sample = &sample;
    lab.root.resize(t.vertex_count());
    for (uint32_t v = 0; v < t.vertex_count(); ++v) {
        lab.root[v] = uf.find(v);
        ++lab.clusterSizes[lab.root[v]];
    }
    lab.clusterCount = static_cast<uint32_t>(lab.clusterSizes.size());
    return lab;
}

bool connected(const ClusterLabeling& label, const VertexId& x, const VertexId& y) {
    const FiniteTruncation& t = *label.sample->trunc;
    int64_t ix = t.index_of(x);
    int64_t iy = t.index_of(y);
    if (ix < 0 || iy < 0) throw InvalidVertexError("vertex not in truncation");
    return label.root[static_cast<size_t>(ix)] == label.root[static_cast<size_t>(iy)];
}

namespace {

Estimate frequency_estimate(uint64_t hits, uint64_t replicas, int windowRadius) {
    Estimate e;
    e.replicas = replicas;
    e.windowRadius = windowRadius;
    e.value = replicas ? static_cast<double>(hits) / static_cast<double>(replicas) : 0.0;
    e.stderr_ = replicas ? std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(replicas)) : 0.0;
    return e;
}

} // namespace

Estimate two_point_estimate(const GraphSpec& spec, const VertexId& x, const VertexId& y, double p,
                            int windowRadius, uint64_t replicas, uint64_t seed, int threads,
                            uint64_t cap) {
    validate_vertex(spec, x);
    validate_vertex(spec, y);
    const VertexId& center = (x.encode() <= y.encode()) ? x : y;
    FiniteTruncation trunc = ball(spec, center, windowRadius, cap);
    int64_t ix = trunc.index_of(x);
    int64_t iy = trunc.index_of(y);
    if (ix < 0 || iy < 0) throw InvalidVertexError("endpoint outside the window");
    if (ix == iy) {
        Estimate e = frequency_estimate(replicas, replicas, windowRadius);
        return e;
    }
    const uint32_t ux = static_cast<uint32_t>(ix), uy = static_cast<uint32_t>(iy);
    std::vector<uint8_t> hit(replicas, 0);
    run_replicas(replicas, threads, [&](uint64_t r) {
        PercolationSample s = sample_bonds(trunc, p, seed, r);
        UnionFind uf(static_cast<uint32_t>(trunc.vertex_count()));
        for (size_t e = 0; e < trunc.edge_count(); ++e)
            if (s.open(e)) uf.unite(trunc.edges[e].first, trunc.edges[e].second);
        hit[r] = uf.find(ux) == uf.find(uy);
    });
    uint64_t hits = 0;
    for (uint8_t h : hit) hits += h;
    return frequency_estimate(hits, replicas, windowRadius);
}

namespace {

// L^dim box of Z^dim with row-major vertex indexing; crossing is along
// axis 0 between the two opposite faces.
struct BoxGraph {
    int dim, L;
    uint64_t nVerts;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    std::vector<uint32_t> left, right;
};

BoxGraph make_box(int dim, int L) {
    if (dim < 1 || dim > 3) throw SpecError("crossing box supports dim 1..3");
    if (L < 2) throw SpecError("box side must be >= 2");
    BoxGraph b;
    b.dim = dim;
    b.L = L;
    uint64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<uint64_t>(L);
    b.nVerts = n;
    std::vector<uint64_t> stride(dim, 1);
    for (int i = dim - 2; i >= 0; --i) stride[i] = stride[i + 1] * static_cast<uint64_t>(L);
    std::vector<int> c(dim, 0);
    for (uint64_t v = 0; v < n; ++v) {
        for (int axis = 0; axis < dim; ++axis) {
            if (c[axis] + 1 < L)
                b.edges.emplace_back(static_cast<uint32_t>(v), static_cast<uint32_t>(v + stride[axis]));
        }
        if (c[0] == 0) b.left.push_back(static_cast<uint32_t>(v));
        if (c[0] == L - 1) b.right.push_back(static_cast<uint32_t>(v));
        for (int axis = dim - 1; axis >= 0; --axis) {
            if (++c[axis] < L) break;
            c[axis] = 0;
        }
    }
    return b;
}

bool box_crossing(const BoxGraph& b, double p, uint64_t seed, uint64_t replica) {
    UnionFind uf(static_cast<uint32_t>(b.nVerts) + 2);
    const uint32_t S = static_cast<uint32_t>(b.nVerts);
    const uint32_t T = S + 1;
    for (uint32_t v : b.left) uf.unite(S, v);
    for (uint32_t v : b.right) uf.unite(T, v);
    for (size_t e = 0; e < b.edges.size(); ++e) {
        if (unit_draw(seed, stream::Bonds, replica, e) < p)
            uf.unite(b.edges[e].first, b.edges[e].second);
    }
    return uf.find(S) == uf.find(T);
}

double box_crossing_fraction(const BoxGraph& b, double p, uint64_t replicas, uint64_t seed,
                             int threads) {
    std::vector<uint8_t> hit(replicas, 0);
    run_replicas(replicas, threads, [&](uint64_t r) { hit[r] = box_crossing(b, p, seed, r); });
    uint64_t hits = 0;
    for (uint8_t h : hit) hits += h;
    return static_cast<double>(hits) / static_cast<double>(replicas);
}

} // namespace

double crossing_probability(int dim, int L, double p, uint64_t replicas, uint64_t seed,
                            int threads) {
    if (p < 0.0 || p > 1.0) throw SpecError("p must be in [0,1]");
    BoxGraph b = make_box(dim, L);
    return box_crossing_fraction(b, p, replicas, seed, threads);
}

double estimate_pc(int dim, int L, double tolerance, uint64_t replicasPerProbe, uint64_t seed,
                   int threads, double pLo, double pHi) {
    if (tolerance <= 0) throw SpecError("tolerance must be > 0");
    BoxGraph b = make_box(dim, L);
    // Same (seed, replica, edge) stream at every probe: the per-replica
    // crossing indicator is monotone in p, so bisection is sound.
    double fLo = box_crossing_fraction(b, pLo, replicasPerProbe, seed, threads);
    double fHi = box_crossing_fraction(b, pHi, replicasPerProbe, seed, threads);
    if (fLo > 0.5 || fHi < 0.5)
        throw NonBracketingError("initial interval does not bracket crossing probability 1/2");
    while (pHi - pLo > tolerance) {
        double mid = 0.5 * (pLo + pHi);
        double f = box_crossing_fraction(b, mid, replicasPerProbe, seed, threads);
        if (f < 0.5) pLo = mid;
        else pHi = mid;
    }
    return 0.5 * (pLo + pHi);
}

Estimate boundary_reach_probability(const FiniteTruncation& trunc, double p, uint64_t replicas,
                                    uint64_t seed, int threads) {
    int64_t center = -1;
    for (size_t i = 0; i < trunc.vertex_count(); ++i) {
        if (trunc.dist[i] == 0) {
            center = static_cast<int64_t>(i);
            break;
        }
    }
    if (center < 0) throw SpecError("truncation has no center");
    const uint32_t c = static_cast<uint32_t>(center);
    std::vector<uint8_t> hit(replicas, 0);
    run_replicas(replicas, threads, [&](uint64_t r) {
        PercolationSample s = sample_bonds(trunc, p, seed, r);
        UnionFind uf(static_cast<uint32_t>(trunc.vertex_count()));
        for (size_t e = 0; e < trunc.edge_count(); ++e)
            if (s.open(e)) uf.unite(trunc.edges[e].first, trunc.edges[e].second);
        uint32_t rc = uf.find(c);
        for (uint32_t v = 0; v < trunc.vertex_count(); ++v) {
            if (trunc.boundary[v] && uf.find(v) == rc) {
                hit[r] = 1;
                break;
            }
        }
    });
    uint64_t hits = 0;
    for (uint8_t h : hit) hits += h;
    return frequency_estimate(hits, replicas, trunc.radius);
}

} // namespace percolab
