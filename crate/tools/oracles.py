"""Reference values for the test suite, computed with PARI/GP and mpmath.

Writes the fixture corpus and the frozen oracle tables used by the Rust
tests. Re-run only when the corpus changes:

    python3 tools/oracles.py
"""

import json
import pathlib

import cypari2
import mpmath as mp

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORE = ROOT / "crates" / "core"

pari = cypari2.Pari()
pari.set_real_precision(80)
# Library calls ignore the real precision default and need it in bits.
PREC = 300
mp.mp.dps = 60

CURVES = [
    ("11a1", [0, -1, 1, -10, -20]),
    ("11a3", [0, -1, 1, 0, 0]),
    ("14a1", [1, 0, 1, 4, -6]),
    ("15a1", [1, 1, 1, -10, -10]),
    ("17a1", [1, -1, 1, -1, -14]),
    ("19a1", [0, 1, 1, -9, -15]),
    ("20a1", [0, 1, 0, 4, 4]),
    ("24a1", [0, -1, 0, -4, 4]),
    ("27a1", [0, 0, 1, 0, -7]),
    ("32a2", [0, 0, 0, -1, 0]),
    ("36a1", [0, 0, 0, 0, 1]),
    ("37a1", [0, 0, 1, -1, 0]),
    ("43a1", [0, 1, 1, 0, 0]),
    ("53a1", [1, -1, 1, 0, 0]),
    ("57a1", [0, -1, 1, -2, 2]),
    ("58a1", [1, -1, 0, -1, 1]),
    ("61a1", [1, 0, 0, -2, 1]),
    ("65a1", [1, 0, 0, -1, 0]),
    ("77a1", [0, 0, 1, 2, 0]),
    ("79a1", [1, 1, 1, -2, 0]),
    ("389a1", [0, 1, 1, -2, 0]),
    ("433a1", [1, 0, 0, 0, 1]),
    ("5077a1", [0, 0, 1, -7, 6]),
    ("x3m2", [0, 0, 0, 0, -2]),
    ("x3p17", [0, 0, 0, 0, 17]),
    ("x3p16-nonmin", [0, 0, 0, 0, 16]),
    ("x3m81x-nonmin", [0, 0, 0, -81, 0]),
]


def frac(v):
    return str(pari(v))


def digits(v, n=40):
    return mp.nstr(mp.mpf(str(pari(v))), n, strip_zeros=False)


def generators(E):
    rk = pari.ellrank(E)
    if rk[0] != rk[1]:
        raise SystemExit("rank not determined")
    pts = pari.ellsaturation(E, rk[3], 100) if int(rk[0]) > 0 else []
    # LLL-reduce for small coordinates.
    if int(rk[0]) > 0:
        pts = list(pari.ellQ_genreduce(E, pts)) if hasattr(pari, "ellQ_genreduce") else list(pts)
    return int(rk[0]), [list(p) for p in pts]


def reduce_tau(t):
    while True:
        t = t - mp.nint(t.real)
        if abs(t) < 1 - mp.mpf(10) ** -40:
            t = -1 / t
        else:
            return t


def log_abs_delta(t):
    q = mp.exp(2j * mp.pi * t)
    return mp.log(abs(q)) + 24 * mp.log(abs(mp.qp(q)))


def faltings(E):
    w1, w2 = [mp.mpc(str(pari.real(w)), str(pari.imag(w))) for w in E.omega()]
    tau = w1 / w2 if (w1 / w2).imag > 0 else w2 / w1
    t = reduce_tau(tau)
    disc = abs(mp.mpf(str(E.disc())))
    ld = log_abs_delta(t)
    hf = (mp.log(disc) - ld - 6 * mp.log(2 * t.imag)) / 12
    return t, ld, hf


def main():
    corpus = []
    faltings_rows = []
    heights_rows = []
    reg_rows = []
    for label, a in CURVES:
        E0 = pari(f"ellinit({a})")
        rank, gens = generators(E0)
        corpus.append(
            {
                "label": label,
                "ainvs": [str(v) for v in a],
                "generators": [[frac(p[0]), frac(p[1])] for p in gens],
                "rank": rank,
            }
        )
        m = pari(f"my(v, E = ellminimalmodel(ellinit({a}), &v)); [E, v]")
        Em, ch = m[0], m[1]
        gens_min = [list(pari.ellchangepoint(p, ch)) for p in gens]
        t, ld, hf = faltings(Em)
        faltings_rows.append(
            {
                "label": label,
                "min_ainvs": [str(v) for v in list(Em[:5])],
                "disc_min": str(Em.disc()),
                "tau_re": mp.nstr(t.real, 40),
                "tau_im": mp.nstr(t.imag, 40),
                "log_mod_disc": mp.nstr(ld, 40),
                "hf_plus": mp.nstr(hf, 40),
                "conductor": str(pari.ellglobalred(Em)[0]),
            }
        )
        tors = [list(p) for p in pari.elltors(Em)[2]]
        pts = []
        for g in gens_min:
            pts.append(g)
            for n in (2, 3, 5):
                pts.append(list(pari.ellmul(Em, g, n)))
            pts.append(list(pari.ellneg(Em, g)))
            for tp in tors:
                pts.append(list(pari.elladd(Em, g, tp)))
        if len(gens_min) >= 2:
            pts.append(list(pari.elladd(Em, gens_min[0], gens_min[1])))
            pts.append(list(pari.ellsub(Em, gens_min[0], gens_min[1])))
        for tp in tors:
            pts.append(tp)
        for p in pts:
            if len(p) < 2:
                continue
            h = pari.ellheight(Em, p, precision=PREC) / 2
            heights_rows.append(
                {
                    "label": label,
                    "min_ainvs": [str(v) for v in list(Em[:5])],
                    "x": frac(p[0]),
                    "y": frac(p[1]),
                    "hhat": digits(h),
                }
            )
        if rank > 0:
            reg = pari.ellheightmatrix(Em, gens_min, precision=PREC)
            reg = pari.matdet(reg) / 2**rank
        else:
            reg = 1
        reg_rows.append({"label": label, "rank": rank, "reg_l": digits(reg)})

    with open(CORE / "fixtures" / "corpus.jsonl", "w") as f:
        for row in corpus:
            f.write(json.dumps(row) + "\n")
    out = CORE / "tests" / "fixtures"
    (out / "faltings.json").write_text(json.dumps(faltings_rows, indent=1) + "\n")
    (out / "heights.json").write_text(json.dumps(heights_rows, indent=1) + "\n")
    (out / "regulators.json").write_text(json.dumps(reg_rows, indent=1) + "\n")
    (out / "eta_i.json").write_text(
        json.dumps(
            {
                "log_delta_i": mp.nstr(24 * mp.log(mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** (mp.mpf(3) / 4))), 50),
                "hf_plus_x3_minus_x": mp.nstr(-2 * mp.log(mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** (mp.mpf(3) / 4))), 50),
            },
            indent=1,
        )
        + "\n"
    )


if __name__ == "__main__":
    main()
