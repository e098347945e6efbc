# 2026/09/03
"""Common stuff for ETL modules."""

from collections import namedtuple

from uwids.model import AttackKind

FLOAT_DECIMALS = 6

TRACE_HEADER = [
    "status",
    "time",
    "sender",
    "receiver",
    "layer",
    "pkt_no",
    "src_port",
    "dst_port",
    "flag",
    "info2",
    "energy",
    "et",
    "er",
]
TRACE_FLOAT_FIELDS = {"time", "energy", "et", "er"}

# Column name -> FeatureVector attribute, in dataset order
FEATURE_COLUMNS = {
    "Packet_Status_Cat": "packet_status_cat",
    "Sender_MAC": "sender_mac",
    "ET": "et",
    "Packet_Information2_Cat": "packet_info2_cat",
    "Cumulative_Count": "cumulative_count",
    "Sender_RTR": "sender_rtr",
    "MAC_Ratio": "mac_ratio",
    "ER": "er",
    "RTR_Ratio": "rtr_ratio",
    "Energy": "energy",
    "Time": "time",
    "Sent_Packet_Number": "sent_packet_number",
    "Dst_Port_Cat": "dst_port_cat",
    "Src_Port_Cat": "src_port_cat",
    "Flag_Cat": "flag_cat",
    "Trace_Type_Cat": "trace_type_cat",
}
LABEL_COLUMN = "Attack_Cat"
DATASET_HEADER = [*FEATURE_COLUMNS, LABEL_COLUMN]

CATEGORICAL_COLUMNS = [
    "Packet_Status_Cat",
    "Packet_Information2_Cat",
    "Dst_Port_Cat",
    "Src_Port_Cat",
    "Flag_Cat",
    "Trace_Type_Cat",
]
INTEGER_COLUMNS = ["Sender_MAC", "Cumulative_Count", "Sender_RTR", "Sent_Packet_Number"]
FLOAT_COLUMNS = ["ET", "MAC_Ratio", "ER", "RTR_Ratio", "Energy", "Time"]

# Categories known up front, so that codes do not depend on what a given run
# happened to emit
BASE_CATEGORIES = {
    "Packet_Status_Cat": ["r", "s", "d"],
    "Packet_Information2_Cat": ["0", "1"],
    "Dst_Port_Cat": ["0", "1", "255"],
    "Src_Port_Cat": ["0", "1", "255"],
    "Flag_Cat": ["0", "1", "2"],
    "Trace_Type_Cat": ["RTR", "MAC"],
}

SCENARIO_LABELS = {
    AttackKind.NONE: 0,
    AttackKind.BLACKHOLE: 1,
    AttackKind.GRAYHOLE: 2,
    AttackKind.FLOODING: 3,
}
SCENARIO_ORDER = list(SCENARIO_LABELS)

ENCODING_FORMAT = "uwids-encoding"
ENCODING_VERSION = 1

ScenarioTrace = namedtuple(
    "ScenarioTrace",
    [
        "scenario",
        "malicious_ids",
        "records",
    ],
)
