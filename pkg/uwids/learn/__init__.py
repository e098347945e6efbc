from uwids.learn.forest import (
    ForestConfig,
    ForestMember,
    ForestModel,
    arf_learn_one,
    arf_predict,
)
from uwids.learn.hoeffding import HoeffdingTree, hoeffding_bound, ht_learn_one, ht_predict
from uwids.learn.persist import load_forest, save_forest
from uwids.learn.prequential import StreamModel, prequential_evaluate
