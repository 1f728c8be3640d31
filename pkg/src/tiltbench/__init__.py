"""tiltbench: exact workbench for higher cluster-tilting theory over F_p."""

__version__ = "0.1.0"
