"""Machine-translation post-editing platform: spans, detection, export, analytics."""

__version__ = "0.1.0"
