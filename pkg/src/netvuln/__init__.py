"""Link vulnerability analysis of linear network models via dynamical structure functions."""

__version__ = "0.1.0"
