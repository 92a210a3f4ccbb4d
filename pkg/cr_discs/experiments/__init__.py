"""
Experiments run by the command-line interface, one per subcommand.
"""

from .base_experiment import BaseExperiment
from .approx_experiment import ApproxExperiment
from .bishop_experiment import BishopExperiment
from .defect_experiment import DefectExperiment
from .deform_rank_experiment import DeformRankExperiment
from .isotopy_experiment import IsotopyExperiment
from .remove_experiment import RemoveExperiment
from .selftest_experiment import SelfTestExperiment
from .wedge_experiment import WedgeExperiment

EXPERIMENTS = {
    experiment.name: experiment
    for experiment in (
        BishopExperiment,
        DefectExperiment,
        DeformRankExperiment,
        WedgeExperiment,
        IsotopyExperiment,
        ApproxExperiment,
        RemoveExperiment,
        SelfTestExperiment,
    )
}

__all__ = [
    "BaseExperiment",
    "EXPERIMENTS",
    "ApproxExperiment",
    "BishopExperiment",
    "DefectExperiment",
    "DeformRankExperiment",
    "IsotopyExperiment",
    "RemoveExperiment",
    "SelfTestExperiment",
    "WedgeExperiment",
]
