from .analysis import register_analysis_tools
from .experiments import register_experiment_tools

__all__ = [
    "register_analysis_tools",
    "register_experiment_tools",
]
