"""Swiss-system tournament pairing via maximum weight perfect matching."""

__version__ = "0.1.0"
