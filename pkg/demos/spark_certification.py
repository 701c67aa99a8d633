"""Finite Gabor systems and spark certification.

A length-L window c generates L^2 translate/modulate columns; the spark of
that L x L^2 matrix decides how many spreading cells one delta train can
separate.  Generic windows reach the maximum L+1 ("full spark"); windows
bunched on k < L indices top out at k+1.
"""

import numpy as np

from opsample import Window, build_gabor_matrix, generate_window, spark


def main():
    print("=== generic draws at L = 3 ===")
    for seed in range(4):
        rng = np.random.default_rng(seed)
        w = Window(3, rng.standard_normal(3) + 1j * rng.standard_normal(3))
        G = build_gabor_matrix(w)
        print(f"  seed {seed}: spark {spark(G)}  (full spark is L+1 = 4)")

    print("=== certified windows from the generator ===")
    w = generate_window(5, seed=235)
    G = build_gabor_matrix(w)
    norms = np.linalg.norm(G.entries, axis=0)
    gram = np.abs(G.entries.conj().T @ G.entries) / np.outer(norms, norms)
    np.fill_diagonal(gram, 0.0)
    print(f"  L=5 full-spark window: spark {spark(G)}, coherence {gram.max():.3f}")

    print("=== bunched windows: support on the first k indices ===")
    for k in (2, 3):
        w = generate_window(5, target="spark_k", k=k, seed=1)
        print(f"  k={k}: ||c||_0 = {w.support_size()}, spark {spark(build_gabor_matrix(w))}"
              f"  (k+1 = {k + 1})")


if __name__ == "__main__":
    main()
