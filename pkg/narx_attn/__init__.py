"""NARX-Attn: dual-stage attention recurrent networks for NARX time-series prediction.
"""

__version__ = "0.1.0"
