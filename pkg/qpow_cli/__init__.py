"""Energy-cost estimation for classical and quantum Proof-of-Work miners."""

__version__ = "0.1.0"
