"""Named parameter sets for the simulator commands."""
