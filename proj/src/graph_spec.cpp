#include "percolab/graph_spec.hpp"

#include <map>
#include <sstream>

#include "percolab/errors.hpp"

namespace percolab {

std::string kind_name(GraphKind k) {
    switch (k) {
        case GraphKind::RegularTree: return "regular-tree";
        case GraphKind::Lattice: return "lattice";
        case GraphKind::TreeWithLatticeInsertions: return "tree-with-lattice-insertions";
        case GraphKind::StretchedTree: return "stretched-tree";
        case GraphKind::TreePlusRay: return "tree-plus-ray";
        case GraphKind::LatticeJoinTree: return "lattice-join-tree";
    }
    throw SpecError("unknown graph kind");
}

GraphKind kind_from_name(const std::string& name) {
    static const std::map<std::string, GraphKind> table = {
        {"regular-tree", GraphKind::RegularTree},
        {"lattice", GraphKind::Lattice},
        {"tree-with-lattice-insertions", GraphKind::TreeWithLatticeInsertions},
        {"stretched-tree", GraphKind::StretchedTree},
        {"tree-plus-ray", GraphKind::TreePlusRay},
        {"lattice-join-tree", GraphKind::LatticeJoinTree},
    };
    auto it = table.find(name);
    if (it == table.end()) throw SpecError("unknown graph kind: " + name);
    return it->second;
}

int GraphSpec::tree_degree() const {
    switch (kind) {
        case GraphKind::RegularTree:
        case GraphKind::TreePlusRay: return degree;
        case GraphKind::TreeWithLatticeInsertions:
        case GraphKind::StretchedTree: return 4 * d;
        case GraphKind::LatticeJoinTree: return treeDegree;
        case GraphKind::Lattice: break;
    }
    throw SpecError("spec has no tree part");
}

void GraphSpec::validate() const {
    switch (kind) {
        case GraphKind::RegularTree:
        case GraphKind::TreePlusRay:
            if (degree < 3) throw SpecError("tree degree must be >= 3");
            break;
        case GraphKind::Lattice:
            if (d < 1) throw SpecError("lattice dimension must be >= 1");
            break;
        case GraphKind::TreeWithLatticeInsertions:
        case GraphKind::StretchedTree:
            if (d < 1) throw SpecError("insertion dimension must be >= 1");
            if (n0 < 1) throw SpecError("n0 must be >= 1");
            break;
        case GraphKind::LatticeJoinTree:
            if (latticeDim < 1) throw SpecError("lattice dimension must be >= 1");
            if (treeDegree < 3) throw SpecError("tree degree must be >= 3");
            break;
    }
}

std::string GraphSpec::to_text() const {
    std::ostringstream os;
    os << "kind = " << kind_name(kind) << "\n";
    switch (kind) {
        case GraphKind::RegularTree:
        case GraphKind::TreePlusRay: os << "degree = " << degree << "\n"; break;
        case GraphKind::Lattice: os << "d = " << d << "\n"; break;
        case GraphKind::TreeWithLatticeInsertions:
        case GraphKind::StretchedTree:
            os << "d = " << d << "\n"
               << "n0 = " << n0 << "\n";
            break;
        case GraphKind::LatticeJoinTree:
            os << "latticeDim = " << latticeDim << "\n"
               << "treeDegree = " << treeDegree << "\n";
            break;
    }
    os << "product = " << (product ? "true" : "false") << "\n";
    return os.str();
}

namespace {

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        int v = std::stoi(value, &pos);
        if (pos != value.size()) throw SpecError("");
        return v;
    } catch (...) {
        throw SpecError("bad integer for " + key + ": " + value);
    }
}

} // namespace

GraphSpec GraphSpec::from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw SpecError("bad graph line: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) throw SpecError("duplicate graph key: " + key);
        kv[key] = value;
    }
    auto it = kv.find("kind");
    if (it == kv.end()) throw SpecError("graph block missing kind");
    GraphSpec s;
    s.kind = kind_from_name(it->second);
    kv.erase(it);
    for (auto& [key, value] : kv) {
        if (key == "degree") s.degree = parse_int(key, value);
        else if (key == "d") s.d = parse_int(key, value);
        else if (key == "n0") s.n0 = parse_int(key, value);
        else if (key == "latticeDim") s.latticeDim = parse_int(key, value);
        else if (key == "treeDegree") s.treeDegree = parse_int(key, value);
        else if (key == "product") {
            if (value == "true") s.product = true;
            else if (value == "false") s.product = false;
            else throw SpecError("product must be true or false");
        } else {
            throw SpecError("unknown graph key: " + key);
        }
    }
    s.validate();
    return s;
}

std::string GraphSpec::display() const {
    std::ostringstream os;
    os << kind_name(kind) << "(";
    switch (kind) {
        case GraphKind::RegularTree:
        case GraphKind::TreePlusRay: os << degree; break;
        case GraphKind::Lattice: os << d; break;
        case GraphKind::TreeWithLatticeInsertions:
        case GraphKind::StretchedTree: os << d << ",n0=" << n0; break;
        case GraphKind::LatticeJoinTree: os << latticeDim << "," << treeDegree; break;
    }
    os << ")";
    if (product) os << "xZ";
    return os.str();
}

GraphSpec GraphSpec::regular_tree(int degree, bool product) {
    GraphSpec s;
    s.kind = GraphKind::RegularTree;
    s.degree = degree;
    s.product = product;
    s.validate();
    return s;
}

GraphSpec GraphSpec::lattice(int d, bool product) {
    GraphSpec s;
    s.kind = GraphKind::Lattice;
    s.d = d;
    s.product = product;
    s.validate();
    return s;
}

GraphSpec GraphSpec::tree_with_insertions(int d, int n0, bool product) {
    GraphSpec s;
    s.kind = GraphKind::TreeWithLatticeInsertions;
    s.d = d;
    s.n0 = n0;
    s.product = product;
    s.validate();
    return s;
}

GraphSpec GraphSpec::stretched_tree(int d, int n0, bool product) {
    GraphSpec s;
    s.kind = GraphKind::StretchedTree;
    s.d = d;
    s.n0 = n0;
    s.product = product;
    s.validate();
    return s;
}

GraphSpec GraphSpec::tree_plus_ray(int degree, bool product) {
    GraphSpec s;
    s.kind = GraphKind::TreePlusRay;
    s.degree = degree;
    s.product = product;
    s.validate();
    return s;
}

GraphSpec GraphSpec::lattice_join_tree(int latticeDim, int treeDegree, bool product) {
    GraphSpec s;
    s.kind = GraphKind::LatticeJoinTree;
    s.latticeDim = latticeDim;
    s.treeDegree = treeDegree;
    s.product = product;
    s.validate();
    return s;
}

} // namespace percolab
