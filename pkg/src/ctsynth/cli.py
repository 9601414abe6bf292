"""Placeholder (under construction)."""
