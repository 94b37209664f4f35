"""Cryptanalysis toolkit for the ElGamal encryption used by a 2019 municipal e-voting deployment."""

__version__ = "0.1.0"
