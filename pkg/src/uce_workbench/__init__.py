"""uce-workbench: exact universal central extensions and H2 for matrix Lie superalgebras."""

__version__ = "0.1.0"
