"""Plexus: live two-topic emotion graph over streamed short posts."""

__version__ = "0.1.0"
