"""Noise channels acting on node states."""
