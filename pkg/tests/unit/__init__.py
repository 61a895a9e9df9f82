"""Unit tests for poissonnet."""
