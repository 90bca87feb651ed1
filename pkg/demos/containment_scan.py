"""Compare small graphs under the pivot-minor order and look for incomparable families.

Run with:  python3 demos/containment_scan.py
"""
import networkx as nx

from pivotlab import containment as ct
from pivotlab import fmatrix as fm
from pivotlab import linking as lk
from pivotlab import chaingroup as cg


def main():
    C5 = fm.graph_matrix(nx.cycle_graph(5))
    P4 = fm.graph_matrix(nx.path_graph(4))
    wit = ct.pivot_minor_contained(P4, C5)
    print("P4 inside C5:", wit.to_dict() if wit else None)
    print("C5 inside P4:", ct.pivot_minor_contained(C5, P4))

    # Every graph on at most four vertices, up to isomorphism, ordered by containment.
    U = ct.universe_upto(2, "skew", 4)
    report = ct.quasi_order_report(U)
    print(f"{len(U)} graphs, {sum(map(sum, report['table']))} comparable ordered pairs")
    print("largest antichain:", max(report["antichains"], key=len))

    # Linkedness between two ends of a path, with a witnessing minor.
    P5 = fm.graph_matrix(nx.path_graph(5))
    N = cg.from_matrix(cg.standard_representation(P5))
    result = lk.linking_equal(N, ["0"], ["4"])
    print("linking between the ends of P5:", result.to_dict())


if __name__ == "__main__":
    main()
