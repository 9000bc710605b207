"""Ion node simulator - dual-type trapped-ion network node models and Monte Carlo."""

__version__ = "0.1.0"
