"""Meta-conformal and conformal-galilean two-point functions: exact generator
algebras, closed-form and Hardy-regularized correlators, and checks."""

__version__ = "0.1.0"
