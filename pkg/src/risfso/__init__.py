"""Performance and secrecy metrics of RIS-assisted FSO links over doubly
inverted Gamma-Gamma turbulence with pointing errors."""

__version__ = "0.1.0"
