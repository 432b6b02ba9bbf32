"""Pydantic records and reports."""
