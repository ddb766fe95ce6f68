"""Mode clustering with soft assignment, cluster connectivity and two-stage MDS layout."""

__version__ = "0.1.0"
