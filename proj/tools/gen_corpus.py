#!/usr/bin/env python3
"""Regenerates corpus/ and tests/corpus_negative/.

Expected values are computed here by brute force in exact rational arithmetic,
independently of the C++ library.
"""
import itertools
import json
import math
import random
from fractions import Fraction as Fr
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
MC = 100_000


def law(name):
    if name == "rademacher":
        return {Fr(-1): Fr(1, 2), Fr(1): Fr(1, 2)}
    if name.startswith("uniform{"):
        vals = [Fr(v) for v in name[8:-1].split(",")]
        return {v: Fr(1, len(vals)) for v in vals}
    if name.startswith("bernoulli("):
        p = Fr(name[10:-1])
        return {Fr(0): 1 - p, Fr(1): p}
    raise ValueError(name)


def law_obj(obj):
    return {Fr(a).limit_denominator(10**6): Fr(w).limit_denominator(10**6)
            for a, w in zip(obj["atoms"], obj["weights"])}


def symmetrize(F):
    G = {}
    for (x, u), (y, v) in itertools.product(F.items(), F.items()):
        G[x - y] = G.get(x - y, 0) + u * v
    return G


def functionals(G, rho, d):
    if rho == 0:
        nz = sum(w for z, w in G.items() if z != 0)
        return nz, nz, nz
    p = sum(w for z, w in G.items() if abs(z) > rho)
    M = sum(w * min(z * z / (rho * rho), 1) for z, w in G.items())
    lam = sum(w * Fr(1, (1 + math.floor(rho / abs(z))) ** d) for z, w in G.items() if z != 0)
    return p, lam, M


def exact_q_1d(F, a, tau):
    # Enumerate every outcome; a closed window of length tau.
    mass = {}
    for combo in itertools.product(F.items(), repeat=len(a)):
        s = sum(x * ak for (x, _), ak in zip(combo, a))
        w = math.prod(wk for _, wk in combo)
        mass[s] = mass.get(s, 0) + w
    pts = sorted(mass)
    best = Fr(0)
    j = 0
    run = Fr(0)
    for i, x in enumerate(pts):
        while j < len(pts) and pts[j] <= x + tau:
            run += mass[pts[j]]
            j += 1
        best = max(best, run)
        run -= mass[x]
    return best


def instance(iid, weights, dist="rademacher", tau=1.0, kappa=1.0, delta=1.0, **kw):
    spec = {"id": iid, "distribution": dist, "weights": weights, "tau": tau, "kappa": kappa, "delta": delta}
    spec.update({"mc_samples": MC})
    spec.update(kw)
    return spec


def pin(spec, q=True, lcd=None, beta0=False):
    F = law(spec["distribution"]) if isinstance(spec["distribution"], str) else law_obj(spec["distribution"])
    a = spec["weights"]
    d = len(a[0]) if isinstance(a[0], list) else 1
    rho = Fr(spec["tau"]).limit_denominator(10**6) / Fr(spec["kappa"]).limit_denominator(10**6)
    p, lam, M = functionals(symmetrize(F), rho, d)
    exp = {"p": float(p), "lambda": float(lam), "M": float(M)}
    if q and d == 1:
        exp["q_exact"] = float(exact_q_1d(F, [Fr(x) for x in a], Fr(spec["tau"]).limit_denominator(10**6)))
    if lcd is not None:
        exp["lcd_D"] = lcd
    if beta0:
        # r = 0: M* mass outside [-delta, delta].
        delta = Fr(spec["delta"]).limit_denominator(10**6)
        exp["beta"] = float(Fr(sum(1 for x in a if abs(Fr(x)) > delta), len(a)))
        exp["gamma"] = exp["beta"]
    spec["expected"] = exp
    return spec


def build():
    rnd = random.Random(20240611)
    out = []

    def ones_lcd(n, g, al):
        return max(1 / (1 + g), 1 - al / math.sqrt(n))

    out.append(pin(instance("c01_ones10_tau0", [1] * 10, tau=0.0)))
    out.append(pin(instance("c02_ones4_lcd", [1] * 4, gamma=0.3, alpha=0.02), lcd=ones_lcd(4, 0.3, 0.02)))
    out.append(pin(instance("c03_ones9_lcd", [1] * 9, gamma=0.5, alpha=10.0), lcd=ones_lcd(9, 0.5, 10)))
    out.append(pin(instance("c04_ones16_lcd", [1] * 16, gamma=0.9, alpha=0.02, tau=2.0),
                   lcd=ones_lcd(16, 0.9, 0.02)))
    out.append(pin(instance("c05_dyadic", [2.0 ** k for k in range(8)], tau=1.0)))
    out.append(pin(instance("c06_ramp_uniform", list(range(1, 9)), dist="uniform{-1,0,1}", tau=2.0, kappa=1.3)))
    out.append(pin(instance("c07_bernoulli", [1] * 12, dist="bernoulli(0.3)", tau=1.0, kappa=0.8)))
    out.append(pin(instance("c08_irrational", [1.0, math.sqrt(2), math.sqrt(3), math.sqrt(5), math.pi / 2],
                            tau=0.5), q=False))
    out.append(pin(instance("c09_custom_law", [1, 2, 3, 5, 8],
                            dist={"atoms": [-2, 0, 1], "weights": [0.2, 0.5, 0.3]}, tau=1.5, kappa=1.0)))
    out.append(pin(instance("c10_r0_tail", [0.5, 1.5, 2.5, 0.25, 3.0], r=0, delta=1.0, tau=1.0), beta0=True))
    out.append(pin(instance("c11_near_lattice", [3.0, 6.001, 9.0, 12.002, 3.0, 6.0], tau=0.5, delta=0.1, r=2),
                   q=False))
    out.append(pin(instance("c12_small_weights", [0.1, 0.2, 0.3, 0.1, 0.2], tau=0.25, kappa=0.5,
                            dist="uniform{-1,0,1}")))
    out.append(pin(instance("c13_mixed_scale", [1, 1, 1, 10, 10, 100], tau=1.0, kappa=2.0,
                            dist="uniform{-2,-1,0,1,2}")))
    for i in range(3):
        w = [round(rnd.uniform(0.2, 2.0), 3) for _ in range(7)]
        out.append(pin(instance(f"c{14 + i}_random_1d_{i}", w, tau=round(rnd.uniform(0.3, 2.0), 2),
                                kappa=1.0, dist="uniform{-1,0,1}"), q=False))
    # Vector weights.
    out.append(pin(instance("c17_plane_axes", [[1, 0], [0, 1], [1, 0], [0, 1]], tau=1.0)))
    out.append(pin(instance("c18_plane_random",
                            [[round(rnd.uniform(-1, 1), 3), round(rnd.uniform(-1, 1), 3)] for _ in range(5)],
                            tau=0.8, dist="uniform{-1,0,1}", kappa=1.0)))
    out.append(pin(instance("c19_plane_ones", [[1, 1]] * 5 + [[1, -1]] * 3, tau=1.5)))
    out.append(pin(instance("c20_space_axes", [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], tau=1.0,
                            lcd_tol=1e-4)))
    out.append(pin(instance("c21_space_random",
                            [[round(rnd.uniform(-1, 1), 3) for _ in range(3)] for _ in range(5)],
                            tau=1.2, lcd_tol=1e-4)))
    out.append(pin(instance("c22_four_d", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]],
                            tau=1.0)))
    out.append(pin(instance("c23_five_d", [[1 if j == k % 5 else 0.5 for j in range(5)] for k in range(7)],
                            tau=1.0, mc_samples=20_000)))
    out.append(pin(instance("c24_large_n", [1.0 + 0.01 * k for k in range(24)], tau=1.0, kappa=2.0), q=False))
    out.append(pin(instance("c25_lemma_chain", [1, 2, 2, 3, 5, 7], dist="uniform{-1,0,1}", tau=3.0, kappa=2.0)))
    return out


def main():
    corpus = ROOT / "corpus"
    corpus.mkdir(exist_ok=True)
    specs = build()
    assert len(specs) == 25
    for s in specs:
        (corpus / f"{s['id']}.json").write_text(json.dumps(s, indent=2) + "\n")
    neg = ROOT / "tests" / "corpus_negative"
    neg.mkdir(parents=True, exist_ok=True)
    bad = json.loads(json.dumps(specs[0]))
    bad["id"] = "corrupted_q"
    bad["expected"]["q_exact"] = 0.25
    (neg / "corrupted_q.json").write_text(json.dumps(bad, indent=2) + "\n")


if __name__ == "__main__":
    main()
