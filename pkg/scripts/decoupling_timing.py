"""Time `local` on a random graph for several worker counts and check the outputs agree."""

import argparse
import itertools
import tempfile
import time
from pathlib import Path

import numpy as np

from perslocal.cli import JobConfig, header, rows_to_csv, run


def random_graph_file(path, n, p, seed):
    rng = np.random.default_rng(seed)
    lines = [f"{v}" for v in range(n)]
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < p:
            lines.append(f"{a} {b} {float(rng.choice([1.0, 2.0, 3.0]))!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--vertices", type=int, default=200)
    parser.add_argument("--p", type=float, default=0.04)
    parser.add_argument("--jobs", default="1,2,4")
    parser.add_argument("--dims", default="1,2")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "graph.edges"
        random_graph_file(path, args.vertices, args.p, args.seed)
        base = dict(input=str(path), kind="graph", scales=[1.0, 2.0, 3.0],
                    dims=[int(x) for x in args.dims.split(",")])
        reference = None
        for jobs in (int(x) for x in args.jobs.split(",")):
            t0 = time.perf_counter()
            rows, timings, scales = run(JobConfig(**base, jobs=jobs))
            wall = time.perf_counter() - t0
            text = rows_to_csv(rows, header(JobConfig(**base), scales))
            reference = reference or text
            t = np.array(list(timings.values()))
            print(f"jobs={jobs}: {len(rows)} tasks  wall {wall:.2f}s  task mean {t.mean() * 1e3:.2f}ms "
                  f"max {t.max() * 1e3:.2f}ms  identical={text == reference}")


if __name__ == "__main__":
    main()
