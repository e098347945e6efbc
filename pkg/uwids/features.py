# 2026/09/07
"""
features.py - Feature engineering over trace records.

Defines class 'FeatureDeriver', the streaming state that turns trace records
into FeatureVectors, and the functions 'derive_features' and 'label_record'.

Running counts:
- 'sender_rtr' / 'sender_mac': records sent by the row's sender at RTR /
MAC level so far, the current row included when it matches.
- 'cumulative_count': records of the row's trace type so far.
- 'rtr_ratio' / 'mac_ratio': sender count over cumulative count, computed
on rows of the matching type and carried forward on the other type (0
before the first occurrence).

"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from uwids.model import AttackKind, FeatureVector, TraceLayer, TraceRecord


class FeatureDeriver:
    """Single-pass feature state.

    Feeding a stream in chunks through the same deriver gives the same
    vectors as feeding it at once.

    """

    def __init__(self) -> None:
        self.sender_counts = {TraceLayer.RTR: Counter(), TraceLayer.MAC: Counter()}
        self.cumulative = {TraceLayer.RTR: 0, TraceLayer.MAC: 0}
        self.last_ratio = {TraceLayer.RTR: 0.0, TraceLayer.MAC: 0.0}

    def update(self, record: TraceRecord, label: int = 0) -> FeatureVector:
        layer = record.layer
        self.sender_counts[layer][record.sender] += 1
        self.cumulative[layer] += 1
        self.last_ratio[layer] = (
            self.sender_counts[layer][record.sender] / self.cumulative[layer]
        )

        return FeatureVector(
            packet_status_cat=record.status.value,
            sender_mac=self.sender_counts[TraceLayer.MAC][record.sender],
            et=record.et,
            packet_info2_cat=record.info2,
            cumulative_count=self.cumulative[layer],
            sender_rtr=self.sender_counts[TraceLayer.RTR][record.sender],
            mac_ratio=self.last_ratio[TraceLayer.MAC],
            er=record.er,
            rtr_ratio=self.last_ratio[TraceLayer.RTR],
            energy=record.energy,
            time=record.time,
            sent_packet_number=record.pkt_no,
            dst_port_cat=record.dst_port,
            src_port_cat=record.src_port,
            flag_cat=record.flag,
            trace_type_cat=layer.value,
            attack_cat=label,
        )


def derive_features(
    records: Iterable[TraceRecord],
    *,
    deriver: FeatureDeriver | None = None,
    malicious: Iterable[int] = (),
    scenario: AttackKind | str = AttackKind.NONE,
) -> list[FeatureVector]:
    """Derives feature vectors from time-ordered records, in input order.

    A given `deriver` carries its state over from previous calls. Labels are
    set with 'label_record' from `malicious` and `scenario`.

    """
    deriver = deriver or FeatureDeriver()
    malicious = frozenset(malicious)
    scenario = AttackKind(scenario)
    return [
        deriver.update(record, label_record(record, malicious, scenario))
        for record in records
    ]


def label_record(
    record: TraceRecord, malicious: frozenset[int] | set[int], scenario: AttackKind | str
) -> int:
    """Attack class of `record` within a scenario trace.

    - Blackhole: 1 when the receiver is malicious.
    - Grayhole: 2 when the sender or the receiver is malicious.
    - Flooding: 3 when the sender is malicious.
    - Otherwise 0.

    """
    scenario = AttackKind(scenario)
    if scenario == AttackKind.BLACKHOLE and record.receiver in malicious:
        return 1
    if scenario == AttackKind.GRAYHOLE and (
        record.sender in malicious or record.receiver in malicious
    ):
        return 2
    if scenario == AttackKind.FLOODING and record.sender in malicious:
        return 3
    return 0
