"""Independent verification: minimizers, goodness of fit, quadrature."""
