"""Delayed-choice quantum eraser toolkit: exact probabilities, oracles and seeded sampling."""

from .epr import JointConfig, JointDistribution, chsh_s, conditional_probabilities, joint_distribution
from .interferometer import InterferometerConfig, detect_probabilities, fringe_visibility, transfer
from .qstate import ValidationError
from .scully_druhl import SourceModel, SourceOverlap

__version__ = "0.1.0"

__all__ = [
    "InterferometerConfig",
    "JointConfig",
    "JointDistribution",
    "SourceModel",
    "SourceOverlap",
    "ValidationError",
    "chsh_s",
    "conditional_probabilities",
    "detect_probabilities",
    "fringe_visibility",
    "joint_distribution",
    "transfer",
]
