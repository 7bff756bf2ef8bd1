"""Ingestion and embedding sidecar for the corpusforge analytics engine."""

__version__ = "0.1.0"
