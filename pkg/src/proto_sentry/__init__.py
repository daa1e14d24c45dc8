"""Static detection of prototype pollution vulnerabilities in JavaScript."""

__version__ = "0.1.0"
