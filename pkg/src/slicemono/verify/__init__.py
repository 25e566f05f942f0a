"""Numerical checks of the identities, bounds and covering statements."""
