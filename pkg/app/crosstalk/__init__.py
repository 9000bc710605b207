"""Estimators for memory-qubit disturbance caused by communication-qubit operations."""
