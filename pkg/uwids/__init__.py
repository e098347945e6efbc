# 2026/09/23
"""Intrusion detection and prevention workbench for underwater acoustic
sensor networks"""

from .dataset import Dataset, assemble_dataset
from .model import AttackKind, SimConfig
from .pipeline import PipelineConfig, run_pipeline
