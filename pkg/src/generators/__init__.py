"""Principal ideal generators, fundamental domains and ideal enumeration."""
