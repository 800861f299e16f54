"""Independent numpy reference for the Horn-Schunck regression targets."""
import numpy as np


def rep(a, y, x):
    h, w = a.shape
    return a[min(max(y, 0), h - 1), min(max(x, 0), w - 1)]


def shifted(a, dy, dx):
    # out[y, x] = a[clamp(y+dy), clamp(x+dx)]
    h, w = a.shape
    ys = np.clip(np.arange(h) + dy, 0, h - 1)
    xs = np.clip(np.arange(w) + dx, 0, w - 1)
    return a[np.ix_(ys, xs)]


def horn_schunck(f1, f2, alpha, iters):
    a, b = f1, f2
    s = lambda m, dy, dx: shifted(m, dy, dx)
    ex = 0.25 * (s(a, 0, 1) - a + s(a, 1, 1) - s(a, 1, 0) + s(b, 0, 1) - b + s(b, 1, 1) - s(b, 1, 0))
    ey = 0.25 * (s(a, 1, 0) - a + s(a, 1, 1) - s(a, 0, 1) + s(b, 1, 0) - b + s(b, 1, 1) - s(b, 0, 1))
    et = 0.25 * (b - a + s(b, 0, 1) - s(a, 0, 1) + s(b, 1, 0) - s(a, 1, 0) + s(b, 1, 1) - s(a, 1, 1))
    u = np.zeros_like(a)
    v = np.zeros_like(a)
    for _ in range(iters):
        ub = 0.25 * (s(u, 0, -1) + s(u, 0, 1) + s(u, -1, 0) + s(u, 1, 0))
        vb = 0.25 * (s(v, 0, -1) + s(v, 0, 1) + s(v, -1, 0) + s(v, 1, 0))
        t = (ex * ub + ey * vb + et) / (alpha * alpha + ex * ex + ey * ey)
        u = ub - ex * t
        v = vb - ey * t
    return u, v


def blob(w, h, cx, cy, sigma, scale):
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    return scale * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * sigma * sigma))


if __name__ == "__main__":
    for scale in (1.0, 255.0):
        f1 = blob(32, 32, 15.0, 15.5, 4.0, scale)
        f2 = blob(32, 32, 16.0, 15.5, 4.0, scale)
        u, v = horn_schunck(f1, f2, 1.0, 100)
        m = 8
        ui = u[m:-m, m:-m]
        vi = v[m:-m, m:-m]
        print(scale, repr(ui.mean()), repr(np.abs(vi).mean()))
