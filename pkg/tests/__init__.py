"""Tests for algoprob."""
