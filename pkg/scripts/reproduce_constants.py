"""Recompute the numeric constants used in the extremality proofs.

Prints each series value next to the printed figure, then the diagnostic
variants (the shifted-exponent reading of the second constant and the
bound it is actually used against).
"""
import math

from maxtheta.verify import constant_diagnostics, reproduce_constants


def show(c):
    rel = "<" if c.relation == "<" else "~"
    verdict = "ok" if c.ok else "MISMATCH"
    print(f"{c.name:52s} {c.computed:.12g}  {rel} {c.printed:<12g} {verdict}")


if __name__ == "__main__":
    checks = reproduce_constants()
    for c in checks:
        show(c)
    print()
    diags = constant_diagnostics()
    for c in diags:
        show(c)
    plain, shifted = checks[1].computed, None
    for c in diags:
        if "-1/2)" in c.name:
            shifted = c.computed
    if shifted is not None:
        print(f"\nratio shifted/plain = {shifted / plain:.15f}, exp(pi/2) = {math.exp(math.pi / 2):.15f}")
