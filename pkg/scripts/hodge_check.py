"""Compare kernel dimensions with exact persistent local Betti numbers on random VR filtrations."""

import argparse
import itertools

import numpy as np

from perslocal.builders import PointCloud, vr_filtration
from perslocal.numerics import symmetric_eigenvalues
from perslocal.persist import persistent_local_betti, persistent_local_laplacian


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--points", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    counts = {"augmented": 0, "plain": 0, "total": 0}
    for _ in range(args.trials):
        x = PointCloud.from_points(rng.uniform(0, 1, (args.points, 2)))
        scales = sorted(rng.uniform(0.2, 0.8, 3))
        filt = vr_filtration(x, scales, 3)
        for v in range(len(x)):
            pv = filt.persistent_vertex(v)
            for (i, j), n in itertools.product([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)], (1, 2)):
                betti = persistent_local_betti(filt, pv, n, i, j)
                for key, aug in (("augmented", True), ("plain", False)):
                    op = persistent_local_laplacian(filt, pv, n, i, j, augmented=aug)
                    counts[key] += symmetric_eigenvalues(op).zero_multiplicity == betti
                counts["total"] += 1
    total = counts["total"]
    print(f"kernel = persistent local Betti: augmented {counts['augmented']}/{total}, "
          f"without augmentation {counts['plain']}/{total}")


if __name__ == "__main__":
    main()
