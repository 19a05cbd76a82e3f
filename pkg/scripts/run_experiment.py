#!/usr/bin/env python3
"""
Monte-Carlo 实验启动脚本
运行：python scripts/run_experiment.py --help
"""
import argparse
import os
import sys

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dotenv import load_dotenv
load_dotenv()

from graph_wiener.bench import load_config, run_experiment, write_csv
from graph_wiener.errors import GraphWienerError
from graph_wiener.settings import load_settings, setup_logging

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'configs', 'desk_n64.json')


def main():
    parser = argparse.ArgumentParser(
        description="Run a graph Wiener sampling experiment and write the MSE table",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # 默认桌面规模实验 (N=64, 20 trials)
  python scripts/run_experiment.py

  # 指定配置和输出
  python scripts/run_experiment.py --config configs/desk_n64.json --out desk_n64.csv

  # 多线程, 附加解析 MSE 列
  python scripts/run_experiment.py --workers 4 --extra

Methods:
  unc       unconstrained Wiener recovery (W = ΓₓS)
  pre       Wiener correction with predefined cosine W
  sub       subspace-prior correction (first-K eigenvectors or CSV generator)
  smo_pre   smoothness-prior minimax correction
  smo_unc   unconstrained recovery under the smoothness prior
  bl        bandlimited sampling and reconstruction, no correction
  identity  S = H = W = I
        """
    )

    parser.add_argument('--config', default=DEFAULT_CONFIG, help='Experiment JSON (default: configs/desk_n64.json)')
    parser.add_argument('--out', default='mse_table.csv', help='CSV output path (default: mse_table.csv)')
    parser.add_argument('--workers', type=int, default=None, help='Trial threads (default: config or GRAPH_WIENER_WORKERS)')
    parser.add_argument('--extra', action='store_true', help='Append analytic_db and failed columns')

    args = parser.parse_args()

    settings = load_settings()
    setup_logging(settings.log_level)

    try:
        config = load_config(args.config)
    except (OSError, ValueError) as e:
        print(f"⚠️  Invalid config {args.config}: {e}")
        return 2

    workers = args.workers or config.workers or settings.workers
    graphs = ', '.join(g.name for g in config.graphs)

    print(f"""
╔══════════════════════════════════════════════════════════════╗
║                    Graph Wiener Experiment                    ║
╠══════════════════════════════════════════════════════════════╣
║  Config:      {config.name:<44} ║
║  Graphs:      {graphs:<44} ║
║  Noise σ²:    {', '.join(f'{s:g}' for s in config.noise):<44} ║
║  Domains:     {', '.join(config.domains):<44} ║
║  Methods:     {', '.join(config.methods):<44} ║
║  Ratio M:     {config.ratio:<44} ║
║  Trials:      {config.trials:<44} ║
║  Workers:     {workers:<44} ║
╚══════════════════════════════════════════════════════════════╝
    """)

    try:
        table = run_experiment(config, workers=workers, progress=settings.progress)
    except GraphWienerError as e:
        print(f"✗ Experiment failed: {e}")
        return e.exit_code

    write_csv(table, args.out, extra=args.extra)
    failed = sum(r.failed for r in table.rows)

    print(f"""
╔══════════════════════════════════════════════════════════════╗
║                    Results                                    ║
╠══════════════════════════════════════════════════════════════╣
║  Rows:        {len(table):<44} ║
║  Failed:      {failed:<44} ║
║  Output:      {args.out:<44} ║
╚══════════════════════════════════════════════════════════════╝
    """)
    return 0


if __name__ == "__main__":
    sys.exit(main())
