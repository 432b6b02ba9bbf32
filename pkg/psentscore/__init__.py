"""PSentScore: affective-content preservation measures for dialogue summaries."""

__version__ = "0.1.0"
