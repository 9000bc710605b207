"""Rate and infidelity budgets of the ion-photon link."""
