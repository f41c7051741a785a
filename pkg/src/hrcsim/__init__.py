"""Multi-fidelity simulation of human-robot collaborative bricklaying."""

__version__ = "0.1.0"
