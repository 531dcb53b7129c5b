"""Anti-jamming channel access: simulator, jammers, learning agents, harness."""

__version__ = "0.1.0"
