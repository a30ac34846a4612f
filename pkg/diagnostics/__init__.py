"""Diagnostics computed on finite balls: geometry, isoperimetry, random walks and cogrowth."""
