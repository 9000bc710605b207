"""Measurement simulation and estimation: tomography, visibilities, arrival histograms and conversion."""
