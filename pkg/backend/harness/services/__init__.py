# Harness services
from .sweep import SweepRecord, SweepPlan, plan_sweep, sweep_point, sweep
from .trend import TrendFit, fit_linear
from .report import CSV_FIELDS, to_csv, to_json, from_json, iteration_drops, text_summary
from .comparison import ComparisonRow, compare_circuit_and_cone

__all__ = [
    'SweepRecord', 'SweepPlan', 'plan_sweep', 'sweep_point', 'sweep',
    'TrendFit', 'fit_linear',
    'CSV_FIELDS', 'to_csv', 'to_json', 'from_json', 'iteration_drops', 'text_summary',
    'ComparisonRow', 'compare_circuit_and_cone',
]
