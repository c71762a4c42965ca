#include "percolab/branching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <set>

#include "percolab/errors.hpp"
#include "percolab/replica.hpp"
#include "percolab/rng.hpp"

namespace percolab {

void OffspringLawU::validate() const {
    if (!(c > 0.0 && c <= 1.0)) throw SpecError("offspring law needs c in (0,1]");
}

uint64_t OffspringLawU::big() const {
    return static_cast<uint64_t>(std::ceil(4.0 / c));
}

uint64_t ParticleFront::total() const {
    uint64_t t = 0;
    for (const auto& [v, n] : particles) t += n;
    return t;
}

ParticleFront ParticleFront::single(const VertexId& start, uint64_t populationCap) {
    ParticleFront f;
    f.particles.emplace_back(start, 1);
    f.populationCap = populationCap;
    return f;
}

namespace {

enum class Role { TreeVertex, AtOrigin, AtDiag };

Role role_of(const GraphSpec& spec, const VertexId& v) {
    if (v.kind == VertexId::Kind::TreeNode) return Role::TreeVertex;
    if (v.kind == VertexId::Kind::LatticePoint) {
        int n = insertion_index(spec, v.level());
        bool atOrigin = true, atDiag = true;
        for (int64_t c : v.coords) {
            if (c != 0) atOrigin = false;
            if (c != n) atDiag = false;
        }
        if (atOrigin) return Role::AtOrigin;
        if (atDiag) return Role::AtDiag;
    }
    throw InvalidVertexError("particle must sit on a tree vertex or an attachment point");
}

// Window of Z^{d+1} around an attachment point, in start-relative
// coordinates (d lattice offsets, one line offset).  Fiber membership is
// precomputed for both attachment fibers.  Shared and immutable after
// construction.
struct CopyTemplate {
    int d, n, window;
    bool fromDiag;
    std::vector<std::vector<int16_t>> verts; // size d+1
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    // fiber tag per vertex: 0 none, 1 origin fiber, 2 diag fiber
    std::vector<uint8_t> fiber;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> adj; // (neighbor, edge)
    uint32_t startIndex = 0;
};

const CopyTemplate& copy_template(int d, int n, int window, bool fromDiag) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, bool>, CopyTemplate> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(d, n, window, fromDiag);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    CopyTemplate t;
    t.d = d;
    t.n = n;
    t.window = window;
    t.fromDiag = fromDiag;
    // enumerate the L1 ball of Z^{d+1} of radius `window`
    std::map<std::vector<int16_t>, uint32_t> index;
    std::deque<std::vector<int16_t>> queue;
    std::vector<int16_t> origin(d + 1, 0);
    index[origin] = 0;
    t.verts.push_back(origin);
    queue.push_back(origin);
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        int dist = 0;
        for (int16_t c : v) dist += std::abs(c);
        if (dist == window) continue;
        for (int i = 0; i <= d; ++i) {
            for (int s : {1, -1}) {
                auto u = v;
                u[i] = static_cast<int16_t>(u[i] + s);
                if (index.emplace(u, static_cast<uint32_t>(t.verts.size())).second) {
                    t.verts.push_back(u);
                    queue.push_back(u);
                }
            }
        }
    }
    for (uint32_t i = 0; i < t.verts.size(); ++i) {
        for (int axis = 0; axis <= d; ++axis) {
            auto u = t.verts[i];
            u[axis] = static_cast<int16_t>(u[axis] + 1);
            auto it2 = index.find(u);
            if (it2 != index.end()) t.edges.emplace_back(i, it2->second);
        }
    }
    std::sort(t.edges.begin(), t.edges.end());
    t.fiber.assign(t.verts.size(), 0);
    for (uint32_t i = 0; i < t.verts.size(); ++i) {
        bool onOrigin = true, onDiag = true;
        for (int axis = 0; axis < d; ++axis) {
            int rel = t.verts[i][axis];
            int absOrigin = fromDiag ? rel + n : rel; // absolute copy coordinate offset from 0
            if (absOrigin != 0) onOrigin = false;
            if (absOrigin != n) onDiag = false;
        }
        if (onOrigin) t.fiber[i] = 1;
        else if (onDiag) t.fiber[i] = 2;
    }
    t.adj.resize(t.verts.size());
    for (uint32_t e = 0; e < t.edges.size(); ++e) {
        t.adj[t.edges[e].first].push_back({t.edges[e].second, e});
        t.adj[t.edges[e].second].push_back({t.edges[e].first, e});
    }
    t.startIndex = 0;
    return cache.emplace(key, std::move(t)).first->second;
}

// BFS over open template edges; appends fiber offspring to `emit`.
void fiber_offspring(const CopyTemplate& t, uint64_t fiberSalt, double p, const VertexId& at,
                     std::vector<VertexId>& emit) {
    std::vector<uint8_t> open(t.edges.size());
    for (size_t e = 0; e < t.edges.size(); ++e)
        open[e] = to_unit(hash_key(fiberSalt, e)) < p;
    std::vector<uint8_t> seen(t.verts.size(), 0);
    std::deque<uint32_t> q{t.startIndex};
    seen[t.startIndex] = 1;
    while (!q.empty()) {
        uint32_t v = q.front();
        q.pop_front();
        for (auto [nb, e] : t.adj[v]) {
            if (!open[e] || seen[nb]) continue;
            seen[nb] = 1;
            q.push_back(nb);
        }
    }
    const int n = t.n;
    for (uint32_t i = 0; i < t.verts.size(); ++i) {
        if (!seen[i] || !t.fiber[i] || i == t.startIndex) continue;
        VertexId child = at;
        child.coords.assign(at.coords.size(), t.fiber[i] == 1 ? 0 : n);
        child.z = at.z + t.verts[i][t.d];
        emit.push_back(std::move(child));
    }
}

} // namespace

ParticleFront brw_step(const GraphSpec& productSpec, const ParticleFront& front, double p,
                       uint64_t seed, int copyWindow) {
    if (!productSpec.product || productSpec.kind != GraphKind::TreeWithLatticeInsertions)
        throw SpecError("brw_step runs on Product(TreeWithLatticeInsertions)");
    if (p < 0 || p > 1) throw SpecError("p must be in [0,1]");
    if (copyWindow < 1) throw SpecError("copy window must be >= 1");

    const GraphSpec baseSpec = productSpec.base();
    const uint64_t t = front.generation;

    std::map<std::string, std::pair<VertexId, uint64_t>> next;
    auto emit_one = [&](VertexId v) {
        std::string e = v.encode();
        auto it = next.find(e);
        if (it == next.end()) next.emplace(std::move(e), std::make_pair(std::move(v), uint64_t{1}));
        else ++it->second.second;
    };

    ParticleFront out;
    out.generation = t + 1;
    out.populationCap = front.populationCap;

    for (const auto& [v, count] : front.particles) {
        validate_vertex(productSpec, v);
        Role role = role_of(baseSpec, v.base());
        for (uint64_t j = 0; j < count; ++j) {
            uint64_t particleSalt = hash_key(seed, stream::Brw ^ t, vertex_hash(v), j);
            if (role == Role::TreeVertex) {
                auto nbs = neighbors(productSpec, v);
                for (size_t s = 0; s < nbs.size(); ++s) {
                    if (to_unit(hash_key(particleSalt, s + 1)) < p) emit_one(nbs[s]);
                }
            } else {
                // rule 2 / rule 3: tree neighbor with probability p
                int n = insertion_index(baseSpec, v.level());
                if (to_unit(hash_key(particleSalt, 0)) < p) {
                    VertexId treeNb =
                        (role == Role::AtOrigin)
                            ? VertexId::tree(std::vector<uint32_t>(v.word.begin(), v.word.end() - 1))
                            : VertexId::tree(v.word);
                    emit_one(treeNb.with_line(v.z));
                }
                // fiber offspring from the private copy
                const CopyTemplate& tpl =
                    copy_template(baseSpec.d, n, copyWindow, role == Role::AtDiag);
                uint64_t fiberSalt = hash_key(particleSalt, 0xF1BE5ULL);
                std::vector<VertexId> emitted;
                fiber_offspring(tpl, fiberSalt, p, v, emitted);
                for (auto& ch : emitted) emit_one(std::move(ch));
            }
        }
    }

    uint64_t total = 0;
    for (auto& [e, vc] : next) {
        total += vc.second;
        out.particles.emplace_back(std::move(vc.first), vc.second);
    }
    if (total > out.populationCap) out.aborted = true;
    return out;
}

BrwResult simulate_brw(const GraphSpec& productSpec, const VertexId& start, double p, int maxT,
                       uint64_t populationCap, uint64_t seed, int copyWindow) {
    validate_vertex(productSpec, start);
    role_of(productSpec.base(), start.base()); // throws off-rule starts

    BrwResult res;
    std::set<std::string> visited;
    std::map<std::string, VertexId> byEnc;
    auto visit = [&](const VertexId& v) {
        auto [it, ins] = visited.insert(v.encode());
        if (ins) byEnc.emplace(*it, v);
    };

    const std::string startEnc = start.encode();
    ParticleFront front = ParticleFront::single(start, populationCap);
    visit(start);
    for (int t = 1; t <= maxT; ++t) {
        front = brw_step(productSpec, front, p, seed, copyWindow);
        res.reachedT = static_cast<uint64_t>(t);
        for (const auto& [v, cnt] : front.particles) {
            visit(v);
            if (v.encode() == startEnc) res.returnsToStart += cnt;
        }
        if (front.aborted) {
            res.aborted = true;
            break;
        }
        if (front.particles.empty()) break;
    }
    res.finalPopulation = front.total();
    for (auto& [e, v] : byEnc) res.visited.push_back(std::move(v));
    return res;
}

bool is_copy_interior(const GraphSpec& spec, const VertexId& v) {
    if (v.kind != VertexId::Kind::LatticePoint) return false;
    GraphSpec base = spec.base();
    if (base.kind != GraphKind::TreeWithLatticeInsertions) return false;
    int n = insertion_index(base, v.level());
    bool atOrigin = true, atDiag = true;
    for (int64_t c : v.coords) {
        if (c != 0) atOrigin = false;
        if (c != n) atDiag = false;
    }
    return !atOrigin && !atDiag;
}

std::vector<uint8_t> brw_coupled_visited(const FiniteTruncation& productTrunc,
                                         const PercolationSample& sample, const VertexId& start,
                                         int maxT) {
    const FiniteTruncation& tr = productTrunc;
    const GraphSpec baseSpec = tr.spec.base();
    int64_t s0 = tr.index_of(start);
    if (s0 < 0) throw InvalidVertexError("start not in truncation");
    const uint32_t n = static_cast<uint32_t>(tr.vertex_count());

    // fiber tag per vertex: 0 = tree vertex or copy interior, 1/2 = fibers
    std::vector<uint8_t> fiberTag(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        if (tr.verts[v].kind == VertexId::Kind::LatticePoint) {
            int ins = insertion_index(baseSpec, tr.verts[v].level());
            bool atOrigin = true, atDiag = true;
            for (int64_t c : tr.verts[v].coords) {
                if (c != 0) atOrigin = false;
                if (c != ins) atDiag = false;
            }
            fiberTag[v] = atOrigin ? 1 : (atDiag ? 2 : 0);
        }
    }

    std::vector<uint8_t> visited(n, 0), front(n, 0), nextF(n, 0);
    visited[s0] = front[s0] = 1;
    for (int t = 0; t < maxT; ++t) {
        std::fill(nextF.begin(), nextF.end(), 0);
        bool any = false;
        for (uint32_t v = 0; v < n; ++v) {
            if (!front[v]) continue;
            if (tr.verts[v].kind == VertexId::Kind::TreeNode) {
                for (uint32_t a = tr.adjStart[v]; a < tr.adjStart[v + 1]; ++a) {
                    auto [nb, e] = tr.adj[a];
                    if (sample.open(e)) nextF[nb] = 1;
                }
            } else {
                // tree-neighbor step
                for (uint32_t a = tr.adjStart[v]; a < tr.adjStart[v + 1]; ++a) {
                    auto [nb, e] = tr.adj[a];
                    if (tr.verts[nb].kind == VertexId::Kind::TreeNode && sample.open(e))
                        nextF[nb] = 1;
                }
                // open cluster of v inside its copy, intersected with the fibers
                std::deque<uint32_t> q{v};
                std::vector<uint32_t> touched{v};
                std::vector<uint8_t> seen(n, 0);
                seen[v] = 1;
                while (!q.empty()) {
                    uint32_t u = q.front();
                    q.pop_front();
                    for (uint32_t a = tr.adjStart[u]; a < tr.adjStart[u + 1]; ++a) {
                        auto [nb, e] = tr.adj[a];
                        if (!sample.open(e) || seen[nb]) continue;
                        if (tr.verts[nb].kind != VertexId::Kind::LatticePoint) continue;
                        if (tr.verts[nb].word != tr.verts[v].word) continue;
                        seen[nb] = 1;
                        q.push_back(nb);
                        touched.push_back(nb);
                    }
                }
                for (uint32_t u : touched) {
                    if (u != v && fiberTag[u]) nextF[u] = 1;
                }
            }
        }
        for (uint32_t v = 0; v < n; ++v) {
            if (nextF[v] && !visited[v]) visited[v] = 1;
            if (nextF[v]) any = true;
        }
        front.swap(nextF);
        if (!any) break;
    }
    return visited;
}

SeriesResult expected_returns_series(int d, int tMax) {
    if (d < 1 || tMax < 1) throw SpecError("expected_returns_series needs d >= 1, tMax >= 1");
    SeriesResult res;
    const double rho = std::sqrt(4.0 * d) / d;
    res.ratio = rho;
    res.partialSums.reserve(tMax);
    double sum = 0;
    for (int t = 1; t <= tMax; ++t) {
        double term = 0;
        for (int s = 0; s <= t; s += 2) term += std::pow(rho, s) * std::pow(2.0, -(t - s));
        sum += term;
        res.partialSums.push_back(sum);
    }
    if (rho < 1.0) {
        double tail = 0;
        for (int s = 0; s <= tMax; s += 2) tail += std::pow(rho, s) * std::pow(2.0, s - tMax);
        int s0 = tMax % 2 == 0 ? tMax + 2 : tMax + 1;
        tail += 2.0 * std::pow(rho, s0) / (1.0 - rho * rho);
        res.converged = tail < 1e-9;
    }
    return res;
}

OffspringDistribution offspring_simulation(int d, int n, double p, uint64_t replicas,
                                           uint64_t seed, int window, int threads, uint64_t cap) {
    if (d < 1) throw SpecError("d must be >= 1");
    if (n < 2) throw SpecError("level crossing needs n >= 2");
    if (p < 0 || p > 1) throw SpecError("p must be in [0,1]");

    const GraphSpec spec = GraphSpec::tree_with_insertions(d, n, true);
    auto levels = level_sequence(d, n);
    const int64_t lPrev = levels[n - 2];
    const int64_t lThis = levels[n - 1];

    const VertexId x = VertexId::tree(std::vector<uint32_t>(lPrev, 0)).with_line(0);
    VertexPredicate keep = [&](const VertexId& v) {
        if (v.kind == VertexId::Kind::LatticePoint)
            return static_cast<int64_t>(v.word.size()) == lThis;
        int64_t lvl = v.level();
        if (lvl > lPrev && lvl < lThis) return true;
        if (lvl == lPrev) return v.base() == x.base() && v.z == 0;
        if (lvl == lThis) return v.z == 0;
        return false;
    };
    FiniteTruncation slab = ball_filtered(spec, x, window, keep, cap);

    const uint32_t xi = static_cast<uint32_t>(slab.index_of(x));
    std::vector<uint32_t> candidates;
    for (uint32_t v = 0; v < slab.vertex_count(); ++v) {
        const VertexId& u = slab.verts[v];
        if (u.kind == VertexId::Kind::TreeNode && u.level() == lThis && u.z == 0)
            candidates.push_back(v);
    }

    std::vector<uint64_t> zs(replicas, 0);
    run_replicas(replicas, threads, [&](uint64_t k) {
        PercolationSample s = sample_bonds(slab, p, seed, k);
        UnionFind uf(static_cast<uint32_t>(slab.vertex_count()));
        for (size_t e = 0; e < slab.edge_count(); ++e)
            if (s.open(e)) uf.unite(slab.edges[e].first, slab.edges[e].second);
        uint32_t rx = uf.find(xi);
        uint64_t z = 0;
        for (uint32_t cidx : candidates)
            if (uf.find(cidx) == rx) ++z;
        zs[k] = z;
    });

    OffspringDistribution dist;
    dist.replicas = replicas;
    dist.levelSize = candidates.size();
    dist.lowerBoundOnly = window < (lThis - lPrev) + static_cast<int64_t>(n) * d + 2;
    uint64_t sum = 0, sumSq = 0;
    for (uint64_t z : zs) {
        ++dist.histogram[z];
        sum += z;
        sumSq += z * z;
    }
    dist.mean = replicas ? static_cast<double>(sum) / static_cast<double>(replicas) : 0;
    if (replicas > 1) {
        double var = (static_cast<double>(sumSq) -
                      static_cast<double>(replicas) * dist.mean * dist.mean) /
                     static_cast<double>(replicas - 1);
        if (var < 0) var = 0;
        dist.stderr_ = std::sqrt(var / static_cast<double>(replicas));
    }
    return dist;
}

DominanceResult dominance_test(const std::vector<uint64_t>& samplesA, const OffspringLawU& lawB,
                               double confidence) {
    if (samplesA.empty()) throw SpecError("dominance test needs samples");
    lawB.validate();
    if (!(confidence > 0 && confidence < 1)) throw SpecError("confidence must be in (0,1)");
    const double m = static_cast<double>(samplesA.size());
    DominanceResult res;
    res.band = std::sqrt(std::log(1.0 / (1.0 - confidence)) / (2.0 * m));
    res.margin = 1e300;
    for (uint64_t t : {uint64_t{0}, lawB.big()}) {
        uint64_t ge = 0;
        for (uint64_t a : samplesA)
            if (a >= t) ++ge;
        double sa = static_cast<double>(ge) / m;
        double sb = lawB.survival(t);
        res.margin = std::min(res.margin, sa - (sb - res.band));
    }
    res.dominates = res.margin >= 0;
    return res;
}

SurvivalEstimate survival_probability(const OffspringLawU& law, int generations,
                                      uint64_t replicas, uint64_t seed, uint64_t populationCap,
                                      int threads) {
    law.validate();
    if (generations < 1) throw SpecError("generations must be >= 1");
    const uint64_t M = law.big();
    const double q = law.p_big();

    std::vector<uint8_t> survived(replicas, 0), capped(replicas, 0);
    run_replicas(replicas, threads, [&](uint64_t k) {
        SplitMix64 rng(hash_key(seed, stream::Gw, k));
        uint64_t pop = 1;
        for (int g = 0; g < generations && pop > 0; ++g) {
            uint64_t next = 0;
            for (uint64_t i = 0; i < pop; ++i)
                if (rng.next_unit() < q) next += M;
            pop = next;
            if (pop >= populationCap) {
                capped[k] = 1;
                break;
            }
        }
        survived[k] = pop > 0;
    });

    uint64_t hits = 0, caps = 0;
    for (uint64_t k = 0; k < replicas; ++k) {
        hits += survived[k];
        caps += capped[k];
    }
    SurvivalEstimate out;
    out.capHits = caps;
    out.est.replicas = replicas;
    out.est.value = static_cast<double>(hits) / static_cast<double>(replicas);
    out.est.stderr_ =
        std::sqrt(out.est.value * (1.0 - out.est.value) / static_cast<double>(replicas));
    return out;
}

} // namespace percolab
