"""Tilting tensor products of induced and Weyl modules for SL2."""
