"""Double-layer potential toolkit for the bi-axially symmetric potential
equation u_xx + u_yy + (2a/x) u_x + (2b/y) u_y = 0 on the quarter plane."""

__version__ = "0.1.0"
