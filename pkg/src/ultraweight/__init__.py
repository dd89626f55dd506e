"""Weight sequences, weight functions and weight matrices on finite windows."""

__version__ = "0.1.0"
TOOL_NAME = "ultraweight"
