"""Cost and error accounting for distilling small-angle rotation magic states."""

__version__ = "0.1.0"
