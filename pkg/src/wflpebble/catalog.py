"""Reference certificates: Petersen, Blanusa B_1/B_2, Flower J_3 and the general Flower families.

Tabulated strategies are stored as ordered ``label:weight`` listings and the
tree structure is recovered by :func:`strategy_from_weights`.
"""

from __future__ import annotations

from fractions import Fraction

from .certificate import Certificate, certificate_from_tables, parse_rational
from .families import blanusa1, blanusa2, flower, petersen, sub


class UnsupportedTarget(KeyError):
    pass


PETERSEN = {
    "a_1": [
        "a_2:4 a_3:2 b_2:2 a_4:1 b_3:1 b_5:1 b_4:1",
        "b_1:4 b_3:2 b_4:2 b_5:1 a_3:1 b_2:1 a_4:1",
        "a_5:4 a_4:2 b_5:2 a_3:1 b_4:1 b_3:1 b_2:1",
    ],
}

BLANUSA2 = {
    "x_1": [
        "z_1:8 z_5:4 z_2:5/2 z_5':2 z_2':5/4 x_5':1 z_1':1 x_2':1/2",
        "x_3:8 z_3:4 x_5:2 x_3':2 x_1':1 x_5':1 x_2':1/2 z_1':1/2 z_2':1/4",
        "x_4:8 z_4:4 x_2:2 x_4':2 x_1':1 x_2':1 z_1':1/2 z_2':1/2",
    ],
    "x_2": [
        "z_2:8 z_2':4 z_1:5/2 x_2':2 z_1':2 x_1':1 x_5':1 x_3':1/2 x_4':1/2 z_5':1/2",
        "x_5:8 x_3:4 z_5:4 z_3:2 z_5':2 x_3':1 x_5':1 x_1':1/2 x_2':1/2",
        "x_4:8 z_4:4 x_1:5/2 x_4':2 z_3:2 x_1':1 x_3':1 x_5':1/2 z_1':1/2",
    ],
    "x_3": [
        "z_3:8 z_4:4 x_3':5/2 x_4':2 x_1':5/4 x_2':1 x_5':1 z_1':1/2 z_2':1/2",
        "x_1:8 z_1:4 x_4:2 z_2:2 z_2':1 x_2':1/2 z_1':1/2 x_1':1/4",
        "x_5:8 z_5:4 x_2:2 z_5':2 x_5':1 z_1':1 x_1':1/2 x_2':1/2 z_2':1/2",
    ],
    "z_1": [
        "x_1:8 x_3:4 x_4:4 z_3:2 z_4:2 x_3':1 x_4':1 x_1':1/2 x_2':1/2 x_5':1/2",
        "z_2:8 z_2':4 x_2:5/2 x_2':2 z_1':2 x_1':1 x_4':1 x_3':1/2 z_4:1/2",
        "z_5:8 z_5':4 x_5:5/2 x_5':2 z_1':2 x_1':1 x_3':1 x_4':1/2 z_3:1/2",
    ],
    "z_2": [
        "z_2':8 z_1':4 x_1':2 x_2':2 x_3':1 x_4':1 x_5':1 z_3:1/2",
        "x_2:8 x_4:4 x_1:2 z_4:2 x_3:1 x_4':1 z_3:1 x_3':1/2",
        "z_1:8 z_5:4 x_5:2 z_5':2 x_3:1 x_5':1 x_3':1/2 z_3:1/2",
    ],
    "z_3": [
        "z_4:8 x_4:4 x_4':4 x_2:2 x_2':2 z_2:1 z_2':1 z_1:1/2 z_1':1/2",
        "x_3:8 x_1:4 x_5:4 z_1:2 z_5:2 z_2:1 x_2:1/2 z_2':1/2 z_5':1/2",
        "x_3':8 x_1':4 x_5':4 z_1':2 z_5':2 z_2':1 x_2':1/2 z_2:1/2 z_5:1/2",
    ],
}

BLANUSA1 = {
    "a_1": [
        "a_1':8 b_2:4 b_2':4 c_2:2 c_2':2 d_1:1 d_1':1 e_1:1/2 e_2:1/2 e_1':1/2 e_2':1/2",
        "b_1:8 c_1:4 d_2:2 e_1:1 e_2:1 d_1:1/2 d_1':1/2 e_1':1/2 e_2':1/2",
        "b_1':8 c_1':4 d_2':2 e_1':1 e_2':1 d_1:1/2 d_1':1/2 e_1:1/2 e_2:1/2",
    ],
    "b_1": [
        "a_1:8 b_1':4 a_1':5/2 c_2:2 c_1':2 d_1:1 d_2':1 e_2':1/2",
        "c_1:8 d_2:4 b_2:5/2 e_1:2 e_2:2 d_1:1 e_2':1 c_2:1/2 d_2':1/2 e_1':1/2",
        "c_2':8 d_1':4 b_2':5/2 e_2:2 e_1':2 d_2':1 e_2':1 c_1':1/2 d_1:1/2 e_1:1/2",
    ],
    "c_1": [
        "b_1:8 c_2':4 a_1:2 b_2':2 d_1':2 c_1':1 d_2':1/2",
        "b_2:8 c_2:4 a_1':2 b_1':2 d_1:2 c_1':1 e_2':1 d_2':1/2",
        "d_2:8 e_1:4 e_2:2 e_1':2 d_2':1 e_2':1",
    ],
    "d_1": [
        "c_2:8 b_2:4 b_1':7/2 a_1':2 c_1:2 a_1:7/4 b_1:1 b_2':1 c_1':1/2 c_2':1/2",
        "e_1:8 d_2:4 e_1':4 c_1:2 d_1':2 b_1:1 c_2':1 a_1:1/2 b_2':1/2",
        "e_2':8 d_2':4 e_2:4 c_1':2 d_1':2 b_2':1 c_2':1 a_1':1/2 b_1:1/2 a_1:1/4",
    ],
    "e_1": [
        "d_1:8 c_2:4 b_2:2 b_1':2 a_1:1 a_1':1 b_2':1/2",
        "d_2:8 c_1:4 b_1:2 e_2:2 a_1:1 c_2':1 a_1':1/2 b_2':1/2",
        "e_1':8 d_2':4 c_1':2 d_1':2 e_2':2 b_2':1 c_2':1 a_1':1/2",
    ],
}

FLOWER3 = {
    "x_0": [
        "z_0:4 v_0:2 y_0:2 v_1:1 v_-1:1 z_1:1/2 z_-1:1/2",
        "x_1:4 y_-1:2 z_1:2 v_1:1 y_1:1/2 v_-1:1/2 y_0:1/4 v_0:1/4",
        "x_-1:4 y_1:2 z_-1:2 v_-1:1 y_-1:1/2 v_1:1/2 y_0:1/4 v_0:1/4",
    ],
    "v_0": [
        "z_0:4 x_0:2 y_0:2 x_1:1 x_-1:1 y_1:1 y_-1:1 z_1:1/2 z_-1:1/2",
        "v_1:4 z_1:2 x_1:1 y_1:1 x_0:1/2 x_-1:1/2 y_-1:1/2",
        "v_-1:4 z_-1:2 x_-1:1 y_-1:1 x_1:1/2 y_0:1/2 y_1:1/2",
    ],
}


def _listing(text: str) -> list[tuple[str, Fraction]]:
    out = []
    for tok in text.split():
        lab, _, w = tok.rpartition(":")
        out.append((lab, parse_rational(w)))
    return out


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def flower_x0_tables(k: int) -> list[list[tuple[str, Fraction]]]:
    if k < 2:
        raise UnsupportedTarget("the general x_0 certificate needs m >= 5")
    t1 = [("z_0", _pow2(k + 1)), ("v_0", _pow2(k))]
    for j in range(1, k + 1):
        t1 += [(sub("v", j), _pow2(k - j)), (sub("v", -j), _pow2(k - j))]
    t1 += [("y_0", Fraction(5, 2)), (sub("z", k), Fraction(1, 2)), (sub("z", -k), Fraction(1, 2))]
    out = [t1]
    for s in (1, -1):
        t = [(sub("x", s * j), _pow2(k + 2 - j)) for j in range(1, k)]
        t += [(sub("z", s * j), Fraction(5)) for j in range(1, k - 1)]
        t += [(sub("x", s * k), Fraction(4)), (sub("z", s * (k - 1)), Fraction(3))]
        t += [(sub("y", s * j), Fraction(5, 2)) for j in range(1, k - 1)]
        t += [
            (sub("z", s * k), Fraction(2)),
            (sub("y", -s * k), Fraction(2)),
            (sub("y", s * (k - 1)), Fraction(3, 2)),
            (sub("v", s * k), Fraction(1)),
            (sub("y", -s * (k - 1)), Fraction(1)),
            (sub("v", -s * k), Fraction(1, 2)),
            (sub("v", s * (k - 1)), Fraction(1, 2)),
            (sub("y", s * k), Fraction(1, 2)),
        ]
        out.append(t)
    return out


def flower_v0_tables(k: int) -> list[list[tuple[str, Fraction]]]:
    if k < 2:
        raise UnsupportedTarget("the general v_0 certificate needs m >= 5")
    t1 = [("z_0", _pow2(k + 1)), ("x_0", _pow2(k)), ("y_0", _pow2(k))]
    for j in range(1, k + 1):
        t1 += [(sub(c, i), _pow2(k - j)) for c in "xy" for i in (j, -j)]
    t1 += [(sub("z", k), Fraction(1, 2)), (sub("z", -k), Fraction(1, 2))]
    out = [t1]
    for s in (1, -1):
        t = [(sub("v", s * j), _pow2(k + 2 - j)) for j in range(1, k + 1)]
        t += [(sub("z", s * j), Fraction(5, 2)) for j in range(1, k)]
        t += [
            (sub("z", s * k), Fraction(2)),
            (sub("x", s * k), Fraction(1)),
            (sub("y", s * k), Fraction(1)),
            (sub("x", -s * k), Fraction(1, 2)),
            (sub("y", -s * k), Fraction(1, 2)),
            (sub("x", s * (k - 1)), Fraction(1, 2)),
            (sub("y", s * (k - 1)), Fraction(1, 2)),
        ]
        out.append(t)
    return out


def flower_z0_tables(k: int) -> list[list[tuple[str, Fraction]]]:
    out = []
    for c in "vxy":
        others = [o for o in "vxy" if o != c]
        t = [(sub(c, 0), _pow2(k + 1))]
        for j in range(1, k + 1):
            t += [(sub(c, j), _pow2(k + 1 - j)), (sub(c, -j), _pow2(k + 1 - j))]
        for j in range(1, k + 1):
            t += [(sub("z", j), Fraction(1)), (sub("z", -j), Fraction(1))]
        t += [(sub(o, i), Fraction(1, 2)) for o in others for i in (k, -k)]
        out.append(t)
    return out


def paper_certificate(family: str, param: int | None = None, target: str | None = None) -> Certificate:
    """The reference certificate for ``target`` on the named graph."""
    family = family.lower()
    if family == "petersen":
        fg, table = petersen(), PETERSEN
    elif family in ("blanusa2", "b2"):
        fg, table = blanusa2(), BLANUSA2
    elif family in ("blanusa1", "b1"):
        fg, table = blanusa1(), BLANUSA1
    elif family == "flower":
        if param is None:
            raise UnsupportedTarget("flower certificates need m")
        fg = flower(param)
        k = (param - 1) // 2
        if target == "z_0":
            return certificate_from_tables(fg.graph, target, flower_z0_tables(k))
        if param == 3:
            table = FLOWER3
        elif target == "x_0":
            return certificate_from_tables(fg.graph, target, flower_x0_tables(k))
        elif target == "v_0":
            return certificate_from_tables(fg.graph, target, flower_v0_tables(k))
        else:
            raise UnsupportedTarget(f"no reference certificate for {target!r} on J_{param}")
    else:
        raise UnsupportedTarget(f"no reference certificates for family {family!r}")
    if target is None:
        target = fg.target_classes[0]
    if target not in table:
        raise UnsupportedTarget(f"no reference certificate for {target!r} on {fg.graph.name}")
    return certificate_from_tables(fg.graph, target, [_listing(t) for t in table[target]])


def covered_targets(family: str, param: int | None = None) -> tuple[str, ...]:
    family = family.lower()
    if family == "petersen":
        return tuple(PETERSEN)
    if family in ("blanusa2", "b2"):
        return tuple(BLANUSA2)
    if family in ("blanusa1", "b1"):
        return tuple(BLANUSA1)
    if family == "flower":
        return ("x_0", "v_0", "z_0")
    raise UnsupportedTarget(family)
