"""Writes data/letters.csv: one continuous stroke per letter, 150 um tall,
100 points evenly spaced by arc length."""

import math
import pathlib

HEIGHT = 150.0
POINTS = 100


def arc(cx, cy, r, a0, a1, n=40):
    return [(cx + r * math.cos(a0 + (a1 - a0) * k / n),
             cy + r * math.sin(a0 + (a1 - a0) * k / n)) for k in range(n + 1)]


def rounded(poly, radius, n=12):
    """Replaces interior corners with circular fillets."""
    out = [poly[0]]
    for a, b, c in zip(poly, poly[1:], poly[2:]):
        u = (a[0] - b[0], a[1] - b[1])
        v = (c[0] - b[0], c[1] - b[1])
        lu, lv = math.hypot(*u), math.hypot(*v)
        u = (u[0] / lu, u[1] / lu)
        v = (v[0] / lv, v[1] / lv)
        half = math.acos(max(-1.0, min(1.0, u[0] * v[0] + u[1] * v[1]))) / 2.0
        d = min(radius / math.tan(half), 0.45 * lu, 0.45 * lv)
        p0 = (b[0] + u[0] * d, b[1] + u[1] * d)
        p1 = (b[0] + v[0] * d, b[1] + v[1] * d)
        for k in range(n + 1):
            t = k / n
            # quadratic blend through the corner
            x = (1 - t) ** 2 * p0[0] + 2 * t * (1 - t) * b[0] + t * t * p1[0]
            y = (1 - t) ** 2 * p0[1] + 2 * t * (1 - t) * b[1] + t * t * p1[1]
            out.append((x, y))
    out.append(poly[-1])
    return out


def resample(poly, n):
    seg = [math.dist(p, q) for p, q in zip(poly, poly[1:])]
    total = sum(seg)
    out, i, acc = [], 0, 0.0
    for k in range(n):
        s = total * k / (n - 1)
        while i < len(seg) - 1 and acc + seg[i] < s:
            acc += seg[i]
            i += 1
        t = 0.0 if seg[i] == 0 else min(1.0, (s - acc) / seg[i])
        p, q = poly[i], poly[i + 1]
        out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def letters():
    h = HEIGHT
    stroke_i = [(0.0, 0.0), (0.0, h)]
    stroke_c = arc(60.0, h / 2, h / 2, math.radians(60), math.radians(300), 120)
    bowl = arc(40.0, 0.75 * h, 0.25 * h, math.pi / 2, -math.pi / 2, 60)
    stroke_r = rounded([(0.0, 0.0), (0.0, h), (40.0, h)], 15.0) + bowl[1:]
    stroke_r = stroke_r + rounded([bowl[-1], (20.0, h / 2), (80.0, 0.0)], 15.0)[1:]
    stroke_a = rounded([(0.0, 0.0), (50.0, h), (83.3, h / 3), (20.0, h / 3)], 15.0)
    return {"I": stroke_i, "C": stroke_c, "R": stroke_r, "A": stroke_a}


def main():
    path = pathlib.Path(__file__).resolve().parent.parent / "data" / "letters.csv"
    with open(path, "w") as f:
        f.write("letter,x,y\n")
        for name, poly in letters().items():
            for x, y in resample(poly, POINTS):
                f.write(f"{name},{x:.6f},{y:.6f}\n")


if __name__ == "__main__":
    main()
