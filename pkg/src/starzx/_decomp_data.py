"""Frozen decomposition data found by tools/derive_identities.py.

BSS_TERMS: seven-term stabilizer decomposition of six T-phases. Each term:
  weight: ScalarExact tuple (a, b, c, d, pow2)
  phases: per-spider phase shift in pi/4 units (replaces the stripped pi/4)
  edges:  Hadamard-edge toggles between spider pairs (i, j)
  leaves: parity constraints as (subset, leaf_phase_in_pi4_units)
"""

BSS_TERMS: list[dict] = []
