"""蒙特卡洛实验框架"""
from .config import METHOD_IDS, ExperimentConfig, GraphSpecModel, load_config
from .pipeline import Cell, ExperimentRunner, TrialResult, run_experiment, run_trial, trial_seed
from .table import CSV_COLUMNS, MseRow, MseTable, parse_csv, read_csv, to_csv, write_csv

__all__ = [
    'METHOD_IDS',
    'ExperimentConfig',
    'GraphSpecModel',
    'load_config',
    'Cell',
    'ExperimentRunner',
    'TrialResult',
    'run_experiment',
    'run_trial',
    'trial_seed',
    'CSV_COLUMNS',
    'MseRow',
    'MseTable',
    'parse_csv',
    'read_csv',
    'to_csv',
    'write_csv',
]
