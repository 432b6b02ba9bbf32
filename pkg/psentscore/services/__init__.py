"""Scoring, tagging and corpus services."""
