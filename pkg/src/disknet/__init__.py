"""Resistor networks in a punctured disk: responses, moves, medial graphs and recovery."""

__version__ = "0.1.0"
