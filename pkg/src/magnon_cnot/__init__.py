"""Simulator for a magnon-switched c-NOT gate on a spin-ladder NMR quantum computer."""

__version__ = "0.1.0"
