#!/usr/bin/env python3
"""Numerically adjudicate the two historical trace-formula disagreements:
the sign of the endpoint-curvature term in the squared-operator sum, and
the constant third term of the fourth-order eigenvalue expansion."""

import argparse

from sinespec import Coefficient, DisputeVariant, dispute


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-N", dest="n", type=int, default=256)
    ap.add_argument("-K", dest="k", type=int, default=64)
    args = ap.parse_args()

    p = Coefficient.harmonic_cos(2)
    q = p.derivative(2) + p * p

    for variant, kw in (
        (DisputeVariant.DIKII_TRFD1, {}),
        (DisputeVariant.DIKII_D2, {}),
        (DisputeVariant.SADOVNICHII_TRS, {"q": q}),
    ):
        rep = dispute(variant, p, n=args.n, k=args.k, **kw)
        print(f"{variant.value}:")
        print(f"  computed quantity : {rep.computed_lhs:+.8f}")
        print(f"  historical side   : {rep.variant_rhs:+.8f}")
        print(f"  reference side    : {rep.reference_rhs:+.8f}")
        print(f"  disagreement      : {rep.disagreement:.8f}")
        print(f"  verdict           : {rep.verdict}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
