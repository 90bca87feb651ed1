"""Walk through pivots, Schur complements and rank-width on a few small graphs.

Run with:  python3 demos/pivots_and_widths.py
"""
import networkx as nx

from pivotlab import chaingroup as cg
from pivotlab import deltamatroid as dm
from pivotlab import fmatrix as fm
from pivotlab import widths as w


def show(title, M):
    print(f"{title}:")
    print("  " + fm.format_matrix(M).replace("\n", "\n  ").rstrip())


def main():
    P3 = fm.adjacency_matrix(["1", "2", "3"], [("1", "2"), ("2", "3")])
    show("path on three vertices", P3)

    # Pivoting on the edge {1,2} is defined because that block is nonsingular.
    show("pivot on {1,2}", fm.pivot(P3, ["1", "2"]))
    show("Schur complement of {1,2}", fm.schur(P3, ["1", "2"]))

    # The nonsingular principal blocks form an even delta-matroid, and pivoting
    # on one of them is a twist of that family.
    D = dm.from_matrix(P3)
    print("feasible sets:", D.feasible)
    print("twist by {1,2}:", dm.twist(D, ["1", "2"]).feasible)

    # Rank-width via exact dynamic programming over subsets.
    for name, G in (("C5", nx.cycle_graph(5)), ("K4", nx.complete_graph(4)),
                    ("Petersen", nx.petersen_graph())):
        M = fm.graph_matrix(G)
        report = w.rank_width(M)
        print(f"{name}: rank-width {report.width}, tree {w.serialize_tree(report.tree, M.ground)}")

    # The same matrix, seen as a Lagrangian chain-group, has the same branch-width.
    N = cg.from_matrix(cg.standard_representation(fm.graph_matrix(nx.cycle_graph(5))))
    print("C5 chain-group: dim", N.dim, "lagrangian", cg.is_lagrangian(N),
          "branch-width", w.branch_width(N).width)


if __name__ == "__main__":
    main()
