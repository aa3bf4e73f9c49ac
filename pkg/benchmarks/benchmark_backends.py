"""Compare the numba and numpy scoring backends on identical synthetic data.

Each backend runs in its own subprocess (the backend is fixed at import
time), scores the same seeded batch, and reports the median wall time; the
parent prints a table with the speedup and the numerical gap between the
two score matrices.

Usage: python3 benchmarks/benchmark_backends.py [--n 10000] [--batch 400]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import tempfile
import time


def build_parser():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10000, help="training instances")
    parser.add_argument("--m", type=int, default=64, help="feature dimension")
    parser.add_argument("--k", type=int, default=10, help="label-space size")
    parser.add_argument("--batch", type=int, default=400, help="test instances per pass")
    parser.add_argument("--repeats", type=int, default=5, help="timed passes (median reported)")
    parser.add_argument("--workers", type=int, default=1, help="scoring worker threads")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--scores-out", help=argparse.SUPPRESS)
    return parser


def child(args):
    import numpy as np

    import simlabel as sl

    rng = np.random.default_rng(args.seed)
    X = rng.normal(size=(args.n, args.m))
    labels = [
        {int(k) + 1 for k in rng.choice(args.k, size=int(rng.integers(1, 4)), replace=False)}
        for _ in range(args.n)
    ]
    model = sl.fit(
        sl.TrainingSet(X, labels, K=args.k), sl.SimilarityConfig(sl.RBF, gamma=1.0)
    )
    batch = rng.normal(size=(args.batch, args.m))
    model.score_batch(batch[:4], workers=args.workers)  # warm up (jit compile)
    times = []
    for _ in range(args.repeats):
        start = time.perf_counter()
        scores = model.score_batch(batch, workers=args.workers)
        times.append(time.perf_counter() - start)
    np.save(args.scores_out, scores)
    print(json.dumps({"backend": sl.BACKEND, "median_s": statistics.median(times)}))


def run_backend(backend, args, scores_path):
    cmd = [
        sys.executable, os.path.abspath(__file__), "--child",
        "--n", str(args.n), "--m", str(args.m), "--k", str(args.k),
        "--batch", str(args.batch), "--repeats", str(args.repeats),
        "--workers", str(args.workers), "--seed", str(args.seed),
        "--scores-out", scores_path,
    ]
    env = dict(os.environ, SIMLABEL_BACKEND=backend)
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
    if proc.returncode != 0:
        return None, proc.stderr.strip().splitlines()[-1] if proc.stderr else "failed"
    return json.loads(proc.stdout.splitlines()[-1]), None


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.child:
        child(args)
        return 0

    import numpy as np

    pairs = args.n * args.batch
    print(
        f"batch scoring: n={args.n} m={args.m} K={args.k} batch={args.batch} "
        f"workers={args.workers} (median of {args.repeats})"
    )
    results = {}
    with tempfile.TemporaryDirectory() as tmp:
        for backend in ("numpy", "numba"):
            path = os.path.join(tmp, f"{backend}.npy")
            result, error = run_backend(backend, args, path)
            if result is None:
                print(f"  {backend:<6}  unavailable ({error})")
                continue
            results[backend] = (result["median_s"], np.load(path))
            per_pair = result["median_s"] / pairs * 1e9
            print(f"  {backend:<6}  {result['median_s']:8.4f} s   {per_pair:6.2f} ns/pair")
    if len(results) == 2:
        t_np, s_np = results["numpy"]
        t_nb, s_nb = results["numba"]
        gap = float(np.max(np.abs(s_np - s_nb)))
        scale = float(np.max(np.abs(s_np))) or 1.0
        print(f"  speedup numba vs numpy: {t_np / t_nb:.2f}x")
        print(f"  max score difference: {gap:.3e} absolute ({gap / scale:.3e} of peak)")
        agree = np.allclose(s_np, s_nb, rtol=1e-9, atol=1e-12)
        print(f"  backends agree within 1e-9: {'yes' if agree else 'NO'}")
        return 0 if agree else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
