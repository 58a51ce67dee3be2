from asymboost.plugin import *
from asymboost.stump import StumpLearner


class StumpLearnerPlugin(LearnerPlugin):
    plugin_type = 'learner'
    name = 'stump'
    learner_class = StumpLearner
