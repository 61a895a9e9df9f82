"""Integration tests for poissonnet."""
