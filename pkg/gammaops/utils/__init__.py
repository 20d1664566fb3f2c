"""
Numerical utilities package.

- quadrature: composite Gauss-Legendre expectations under Beta/Gamma log-densities
- extrapolation: doubling ladders and Richardson extrapolation
"""
