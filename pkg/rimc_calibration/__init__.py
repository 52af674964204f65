"""RRAM drift simulation and DoRA feature-based calibration"""

__version__ = "0.1.0"
