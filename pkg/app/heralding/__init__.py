"""Entangling primitives: direct heralding, Bell-state measurement and single-photon interference."""
