"""Classical capacity of Gaussian thermal memory channels."""

__version__ = "1.0.0"
