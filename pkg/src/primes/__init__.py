"""Prime ideals, residue fields and ideal lattices."""
