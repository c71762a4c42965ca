#pragma once
#include <string>

namespace percolab {

enum class GraphKind {
    RegularTree,
    Lattice,
    TreeWithLatticeInsertions,
    StretchedTree,
    TreePlusRay,
    LatticeJoinTree,
};

// Declarative description of one of the infinite graph families.  The
// `product` flag is the (at most one) cartesian factor of Z; the paper's
// constructions never nest products deeper.
struct GraphSpec {
    GraphKind kind = GraphKind::Lattice;
    int degree = 3;      // RegularTree / TreePlusRay tree degree
    int d = 1;           // lattice dimension (Lattice, insertions of the 4d-tree)
    int n0 = 1;          // first level index whose edges are replaced
    int latticeDim = 99; // LatticeJoinTree lattice factor
    int treeDegree = 10; // LatticeJoinTree tree factor
    bool product = false;

    bool operator==(const GraphSpec&) const = default;

    // Tree degree of the tree part (4d for the insertion families).
    int tree_degree() const;

    void validate() const; // throws SpecError

    // Line-oriented key=value block, the CLI config representation.
    std::string to_text() const;
    static GraphSpec from_text(const std::string& text); // throws SpecError

    // Single-line form for file headers and JSON.
    std::string display() const;

    GraphSpec base() const {
        GraphSpec s = *this;
        s.product = false;
        return s;
    }
    GraphSpec with_line() const {
        GraphSpec s = *this;
        s.product = true;
        return s;
    }

    static GraphSpec regular_tree(int degree, bool product = false);
    static GraphSpec lattice(int d, bool product = false);
    static GraphSpec tree_with_insertions(int d, int n0, bool product = false);
    static GraphSpec stretched_tree(int d, int n0, bool product = false);
    static GraphSpec tree_plus_ray(int degree, bool product = false);
    static GraphSpec lattice_join_tree(int latticeDim = 99, int treeDegree = 10, bool product = false);
};

std::string kind_name(GraphKind k);
GraphKind kind_from_name(const std::string& name); // throws SpecError

} // namespace percolab
