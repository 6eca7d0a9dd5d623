"""
Background tasks for the protocols app.

Sweep points are independent celery tasks with JSON arguments; with
CELERY_TASK_ALWAYS_EAGER they run in-process.
"""

import logging

from celery import shared_task

logger = logging.getLogger(__name__)


@shared_task
def evaluate_sweep_point(config_data, omega_ratio, t, level, reference):
    """
    Infidelity between two Hamiltonian levels at one drive strength.

    Args:
        config_data: configuration document as produced by config_to_dict
        omega_ratio: drive strength Omega / g
        t: comparison time
        level: Hamiltonian level under test
        reference: Hamiltonian level compared against

    Returns:
        dict: {'omega_ratio': float, 'infidelity': float}
    """
    from .runner import sweep_point
    from .serializers import config_from_dict

    config = config_from_dict(config_data)
    row = sweep_point(config, omega_ratio, t, level, reference)
    logger.info(f"Sweep point {config.protocol} omega/g={omega_ratio:g}: infidelity {row['infidelity']:.3e}")
    return row
