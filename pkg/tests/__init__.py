"""Test suite for the balanced ALM splitting suite."""
