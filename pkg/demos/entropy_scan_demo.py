"""Entropy of lifted Bernoulli measures as the mass slides into the
singular fiber, for the three roof regimes.

Run:  python demos/entropy_scan_demo.py
"""

import math

from singflow import (Harmonic, LogHarmonic, Power, Truncated,
                      flow_entropy_bernoulli, roof_integral_bernoulli,
                      singular_limit_scan)

grid = [10.0 ** -e for e in range(3, 13)]

# Regime 1: k*g(k) -> l finite. The entropy ratio tends to 1/(2l).
print("harmonic roof, l = 1  (limit 1/2):")
scan = singular_limit_scan(Harmonic(1.0), grid)
for row in scan.rows:
    print(f"  lambda={row.lam:8.1e}  integral={row.integral:.6e}  "
          f"entropy={row.entropy:.6f}")
print(f"  monotone toward 1/(2l): {scan.monotone_toward_target}, "
      f"final error {scan.final_abs_error:.4f}\n")

# Regime 2: k*g(k) -> infinity. The ratio collapses to zero; the flow keeps
# a principal symbolic extension.
print("square-root roof (limit 0):")
for lam in (1e-2, 1e-4, 1e-6):
    print(f"  lambda={lam:8.1e}  entropy={flow_entropy_bernoulli(lam, Power(0.5)).value:.6f}")
print()

# Regime 3: k*g(k) -> 0. The ratio diverges with the parameter.
print("log-harmonic roof (divergent):")
for lam in (1e-3, 1e-6, 1e-9, 1e-12):
    print(f"  lambda={lam:8.1e}  entropy={flow_entropy_bernoulli(lam, LogHarmonic()).value:.6f}")
print()

# Truncation min(g, a/k) pulls a divergent family back to limit a: the
# integral can only shrink, so the ratio can only grow, and it lands at 1/(2a).
print("truncations of the square-root roof:")
for a in (1.0, 2.0):
    ga = Truncated(Power(0.5), a)
    r = flow_entropy_bernoulli(1e-12, ga).value
    print(f"  a={a:g}: ratio(1e-12) = {r:.5f}   target 1/(2a) = {1 / (2 * a):.3f}")
    for lam in (1e-3, 1e-6):
        base = flow_entropy_bernoulli(lam, Power(0.5)).value
        trunc = flow_entropy_bernoulli(lam, ga).value
        assert base <= trunc, "truncation can only raise the ratio"
print()

# The integral itself is dominated by -2*l*lambda*log(lambda) near zero.
lam = 1e-9
integral = roof_integral_bernoulli(lam, Harmonic(1.0))
print(f"integral at lambda={lam:g}: {integral:.6e}; "
      f"-2*lam*log(lam) = {-2 * lam * math.log(lam):.6e}")
