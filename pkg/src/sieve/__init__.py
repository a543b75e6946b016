"""Type I / type II sums, sqf splitting, lattice counting probes and character-sum scans."""
