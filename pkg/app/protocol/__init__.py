"""Monte Carlo of the node sequence and of entanglement swapping between two nodes."""
