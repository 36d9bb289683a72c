"""QSS Analyzer - Compartición de secretos cuánticos: esquemas QQ/RCQ y códigos correctores."""

__version__ = "0.3.0"
