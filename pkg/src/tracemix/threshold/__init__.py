"""Threshold homomorphic encryption and the re-encryption shuffle."""
