"""Tests for poissonnet."""
