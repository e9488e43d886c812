"""Self-dual metrics from hyperbolic monopoles: geometry, symmetries and twistor checks."""

__version__ = "0.1.0"
