"""Print the worked local and persistent operators next to their expected values."""

import argparse

import numpy as np

from perslocal.builders import WeightedGraph, persistent_laplacian_dim1_graph_closed_form
from perslocal.complex import build_complex
from perslocal.localize import local_laplacian, relative_local_laplacian, to_link_basis
from perslocal.numerics import symmetric_eigenvalues
from perslocal.persist import generalized_persistent_laplacian, persistent_betti_oracle, simplicial_map_morphism


def show(label, mat):
    spec = symmetric_eigenvalues(mat)
    print(f"{label}:\n{np.array2string(np.asarray(mat), precision=4, suppress_small=True)}")
    print(f"  eigenvalues {np.round(spec.eigenvalues, 6).tolist()}  zero_mult {spec.zero_multiplicity}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--simplex-max", type=int, default=5, help="largest n for the n-simplex check")
    args = parser.parse_args()

    # v=0, a=1, b=2, c=3
    k = build_complex([(0, 1, 2), (0, 2, 3)])
    show("two triangles, v, n=1", local_laplacian(k, 0, 1))
    show("two triangles, v, n=1 (with augmentation)", local_laplacian(k, 0, 1, augmented=True))
    show("two triangles, v, n=1 (quotient complex, link basis)",
         to_link_basis(k, 0, 1, relative_local_laplacian(k, 0, 1)))
    show("two triangles, v, n=2", local_laplacian(k, 0, 2))
    show("two triangles, a, n=1", local_laplacian(k, 1, 1))
    show("two triangles, a, n=2", local_laplacian(k, 1, 2))
    for n in range(3, args.simplex_max + 1):
        show(f"{n}-simplex, vertex 0, n=1", local_laplacian(build_complex([tuple(range(n + 1))]), 0, 1))

    square = WeightedGraph.from_edges([(0, 1, 1.0), (0, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)])
    show("square, inner {u1,u2}, persistent n=0", persistent_laplacian_dim1_graph_closed_form(square, [0, 1]))

    two = build_complex([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    tri = build_complex([(0, 1), (0, 2), (1, 2)])
    f = simplicial_map_morphism(two, tri, {0: 0, 1: 1, 2: 2, 3: 0})
    show("fold of two triangles onto one, n=1", generalized_persistent_laplacian(f, 1))
    print(f"  persistent Betti (oracle) {persistent_betti_oracle(f, 1)}\n")

    pendant = build_complex([(0, 1), (0, 2), (1, 2), (0, 3)])
    g = simplicial_map_morphism(pendant, tri, {0: 0, 1: 1, 2: 2, 3: 1})
    show("hollow triangle + pendant edge folded 3->1, n=1", generalized_persistent_laplacian(g, 1))
    print(f"  persistent Betti (oracle) {persistent_betti_oracle(g, 1)}  (kernel is smaller)")


if __name__ == "__main__":
    main()
