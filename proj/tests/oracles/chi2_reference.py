#!/usr/bin/env python3
"""Regenerates the frozen chi-squared CDF values used in test_chi_squared.cpp."""
from scipy.stats import chi2, ncx2

central = [(2, 2), (1, 1), (5, 3), (10, 10), (64, 64), (200, 128), (0.5, 5),
           (130, 128)]
for x, k in central:
    print(f"chi2_cdf({x}, {k}) = {chi2.cdf(x, k):.17g}")

noncentral = [(10, 5, 3), (640, 640, 160), (700, 640, 160), (2, 2, 1),
              (50, 10, 30), (1e5, 640, 1e5), (101000, 640, 1e5),
              (1, 3, 1e-3), (130, 128, 6)]
for x, k, nc in noncentral:
    print(f"ncx2_cdf({x}, {k}, {nc}) = {ncx2.cdf(x, k, nc):.17g}")
