"""Finite-dimensional Malliavin calculus and quasiinvariant flows on Gaussian space."""
