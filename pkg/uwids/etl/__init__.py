# 2026/09/06
"""ETL for uwids data.

Defines ScenarioTrace namedtuple, which groups the trace records of one
scenario with its attack kind and malicious ids, and the readers and
writers of traces, datasets, encoding tables and run logs.

"""

from . import excel
from .common import ScenarioTrace
from .read import parse_trace, read_dataset, read_encoding, read_jsonl, read_trace
from .write import (
    process_path,
    serialize,
    write_dataset,
    write_encoding,
    write_json,
    write_jsonl,
    write_trace,
)
