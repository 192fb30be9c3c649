"""InputShock: input-cost shocks, vertical OFDI and panel difference-in-differences."""

__version__ = "1.0.0"
