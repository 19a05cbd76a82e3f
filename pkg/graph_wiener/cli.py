"""
命令行入口
运行：graph-wiener --help

Subcommands: graph-gen, kernels-dump, recover, experiment, selftest.
Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 numerical failure.
"""
import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from .bench import METHOD_IDS, load_config, run_experiment, to_csv
from .bench.pipeline import ROLE_NOISE, ROLE_SIGNAL, ROLE_VERTEX, build_pipelines, trial_seed
from .errors import GraphWienerError, UsageError
from .generators import GraphSourceFactory, GraphSpec
from .graph_core import laplacian, read_edge_list, write_edge_list
from .kernels import available_kernels, get_kernel, kernel_table
from .priors import FIRST_K_EIGENVECTORS, subspace_prior_from_spec
from .sampling import check_divisible, random_vertex_set
from .selftest import run_selftest
from .settings import load_settings, setup_logging
from .spectral import eigendecompose
from .stationarity import GwssProcess, sample_signal
from .wiener import analytic_mse

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_USAGE = 2


def _load_basis(path: str):
    graph = read_edge_list(path)
    if not graph.connected:
        logger.warning(f"Graph {path} is disconnected")
    return graph, eigendecompose(laplacian(graph))


def _open_out(path: Optional[str]):
    if path is None or path == '-':
        return sys.stdout, False
    return open(path, 'w', newline='', encoding='utf-8'), True


# ================= 子命令 =================

def cmd_graph_gen(args) -> int:
    spec = GraphSpec(kind=args.kind, n=args.n, k=args.k, p=args.p, rows=args.rows, cols=args.cols, seed=args.seed)
    graph = GraphSourceFactory.create(args.kind).generate(spec)
    write_edge_list(graph, args.out)
    logger.info(f"✓ Wrote {args.kind} graph to {args.out}")
    print(f"vertices={graph.n} edges={graph.edge_count}")
    return EXIT_OK


def cmd_kernels_dump(args) -> int:
    _, basis = _load_basis(args.graph)
    kernel = get_kernel(args.kernel, k=args.k, eps=args.eps)
    out, close = _open_out(args.out)
    try:
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['index', 'lambda', 'value'])
        for i, lam, value in kernel_table(basis, kernel):
            writer.writerow([i, str(lam), str(value)])
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_recover(args) -> int:
    if args.sigma2 < 0:
        raise UsageError(f"--sigma2 must be >= 0, got {args.sigma2}")
    _, basis = _load_basis(args.graph)
    k = check_divisible(basis.n, args.ratio)
    process = GwssProcess.from_kernel(basis, get_kernel(args.psd))
    gamma_x = process.covariance().gamma

    vertex_set = None
    if args.domain == 'vertex':
        vertex_set = random_vertex_set(basis.n, k, trial_seed(args.seed, 0, ROLE_VERTEX))
    subspace = None
    if args.method == 'sub':
        subspace = subspace_prior_from_spec(basis, args.subspace_generator, args.subspace_dim or k)
    pipeline = build_pipelines(
        basis, gamma_x, [args.method],
        domain=args.domain, band=args.band, noise=args.sigma2, ratio=args.ratio,
        vertex_set=vertex_set, regularization=args.regularization, subspace_prior=subspace,
    )[args.method]
    if isinstance(pipeline, GraphWienerError):
        raise pipeline

    x = sample_signal(process, trial_seed(args.seed, 0, ROLE_SIGNAL))
    noise_rng = np.random.default_rng(trial_seed(args.seed, 0, ROLE_NOISE))
    eta = np.sqrt(args.sigma2) * noise_rng.standard_normal(pipeline.k)
    y = pipeline.measure(x, eta)
    x_tilde = pipeline.recover_from(y)

    with open(args.out, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['index', 'x', 'y', 'x_tilde'])
        for i in range(basis.n):
            writer.writerow([i, repr(float(x[i])), repr(float(y[i])) if i < len(y) else '', repr(float(x_tilde[i]))])

    empirical = float(np.sum((x_tilde - x) ** 2)) / basis.n
    analytic = analytic_mse(pipeline, gamma_x, args.sigma2) / basis.n
    print(f"method={args.method} domain={args.domain} empirical_mse={empirical:.6g} analytic_mse={analytic:.6g}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = load_config(args.config)
    settings = load_settings()
    workers = args.workers or config.workers or settings.workers
    table = run_experiment(config, workers=workers, progress=settings.progress and not args.no_progress)
    text = to_csv(table, extra=args.extra)
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8', newline='')
        logger.info(f"✓ Wrote {len(table)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest()
    for r in results:
        print(f"{'✓' if r.passed else '✗'} {r.name}: {r.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_SELFTEST_FAILED if failed else EXIT_OK


# ================= 参数解析 =================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='graph-wiener',
        description="Generalized sampling and Wiener recovery of stationary graph signals",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # 生成 64 点传感器图
  graph-wiener graph-gen --kind sensor --n 64 --seed 1 --out sensor64.txt

  # 导出谱核
  graph-wiener kernels-dump --graph sensor64.txt --kernel cosine

  # 单次恢复
  graph-wiener recover --graph sensor64.txt --domain spectral --method unc --sigma2 0.3 --out rec.csv

  # 运行实验
  graph-wiener experiment --config configs/desk_n64.json --out desk_n64.csv
        """
    )
    parser.add_argument('--log-level', default=None, help='Logging level (default: GRAPH_WIENER_LOG_LEVEL or INFO)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('graph-gen', help='Generate a graph and write it as an edge list')
    p.add_argument('--kind', required=True, choices=GraphSourceFactory.get_available_sources())
    p.add_argument('--n', type=int, default=None, help='Vertex count (sensor, er)')
    p.add_argument('--k', type=int, default=6, help='kNN neighbours for sensor graphs (default: 6)')
    p.add_argument('--p', type=float, default=0.3, help='Edge probability for ER graphs (default: 0.3)')
    p.add_argument('--rows', type=int, default=None)
    p.add_argument('--cols', type=int, default=None)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_graph_gen)

    p = sub.add_parser('kernels-dump', help='Write (i, lambda_i, kernel value) as CSV')
    p.add_argument('--graph', required=True, help='Edge-list file')
    p.add_argument('--kernel', required=True, help=f"One of {available_kernels()}")
    p.add_argument('--k', type=int, default=None, help='Passband size for bandlimited')
    p.add_argument('--eps', type=float, default=0.1, help='Offset for smoothness (default: 0.1)')
    p.add_argument('--out', default=None, help='Output path (default: stdout)')
    p.set_defaults(func=cmd_kernels_dump)

    p = sub.add_parser('recover', help='Sample, correct and reconstruct one signal')
    p.add_argument('--graph', required=True, help='Edge-list file')
    p.add_argument('--domain', required=True, choices=['vertex', 'spectral'])
    p.add_argument('--method', required=True, choices=list(METHOD_IDS))
    p.add_argument('--ratio', type=int, default=4, help='Sampling ratio M = N/K (default: 4)')
    p.add_argument('--sigma2', type=float, default=0.0, help='Noise variance (default: 0)')
    p.add_argument('--band', default='fullband', choices=['fullband', 'bandlimited'])
    p.add_argument('--psd', default='gaussian_psd', help='Signal PSD kernel (default: gaussian_psd)')
    p.add_argument('--regularization', type=float, default=0.0)
    p.add_argument('--subspace-generator', default=FIRST_K_EIGENVECTORS,
                   help='Generator for sub: first-K-eigenvectors or an N×K CSV path')
    p.add_argument('--subspace-dim', type=int, default=None, help='K for first-K-eigenvectors (default: N/M)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser('experiment', help='Run a Monte-Carlo experiment from a JSON config')
    p.add_argument('--config', required=True)
    p.add_argument('--out', default=None, help='CSV path (default: stdout)')
    p.add_argument('--workers', type=int, default=None, help='Trial threads')
    p.add_argument('--extra', action='store_true', help='Append analytic_db and failed columns')
    p.add_argument('--no-progress', action='store_true', help='Disable the progress bar')
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser('selftest', help='Run the invariant checks on small graphs')
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = load_settings()
    setup_logging(args.log_level or settings.log_level)

    try:
        return args.func(args)
    except GraphWienerError as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValidationError, json.JSONDecodeError) as e:
        logger.error(f"✗ Invalid config: {e}")
        print(f"error: invalid config: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
