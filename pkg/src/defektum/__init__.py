"""Post-processing and modeling toolkit for point-defect quantum emitters."""

__version__ = "0.1.0"
