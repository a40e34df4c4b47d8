"""Offline value-iteration training of the ADP torque controller."""

__all__ = [ #@
    'CostSpec',
    'stage_cost',
    'TrainingConfig',
    'sample_region',
    'predict_next_state',
    'inner_control_iteration',
    'value_iteration',
    'bellman_residual',
    'one_step_cost',
    'grid_search_control',
    'ValueIteration',
    'TrainingReport',
    'discounted_lqr',
    'regulation_model',
]

__pdoc__ = { #@
    'CostSpec': "Re-export of `pmsmadp.adp.cost.CostSpec`.",
    'TrainingConfig': "Re-export of `pmsmadp.adp.config.TrainingConfig`.",
    'ValueIteration': "Re-export of `pmsmadp.adp.trainer.ValueIteration`.",
    'TrainingReport': "Re-export of `pmsmadp.adp.trainer.TrainingReport`.",
}

from pmsmadp.adp.cost import CostSpec, stage_cost
from pmsmadp.adp.config import TrainingConfig
from pmsmadp.adp.lqr import discounted_lqr, regulation_model
from pmsmadp.adp.trainer import (
    sample_region, predict_next_state, inner_control_iteration, value_iteration,
    bellman_residual, one_step_cost, grid_search_control, ValueIteration, TrainingReport)
