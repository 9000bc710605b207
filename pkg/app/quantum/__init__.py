"""Small dense quantum-state engine for ion-photon node states."""
