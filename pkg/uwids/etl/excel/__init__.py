# 2026/09/20
"""Excel ETL for uwids run reports"""

from .write import write
