# 2026/09/08
"""One-class anomaly detectors"""

from .ensemble import OcsvmEnsemble, ensemble_vote, train_bagged_ensemble
from .iforest import IsolationForestModel, iforest_verdict, train_iforest
from .kernel import rbf_gram, rbf_kernel
from .ocsvm import OcsvmModel, ocsvm_decision, train_ocsvm
from .persist import load_model, save_model
