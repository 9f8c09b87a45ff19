"""Objective problems: benchmark functions, UAV path planning and engineering design."""

from src.problems.models import ObjectiveProblem, ProblemFamily

__all__ = ["ObjectiveProblem", "ProblemFamily"]
