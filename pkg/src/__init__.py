"""maskit2 - marked genus-2 orbifolds with six cone points of order two."""

__version__ = "0.1.0"
