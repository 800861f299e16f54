"""Independent numpy reference for the two-scale saliency fusion.

Prints the frozen values used by the C++ regression tests.
"""
import math
import numpy as np


def gaussian_taps(sigma):
    r = math.ceil(3 * sigma)
    i = np.arange(-r, r + 1, dtype=np.float64)
    t = np.exp(-i * i / (2 * sigma * sigma))
    return t / t.sum()


def pad(p, r):
    return np.pad(p, r, mode="edge")


def conv2d(p, k):
    kh, kw = k.shape
    ry, rx = kh // 2, kw // 2
    q = np.pad(p, ((ry, ry), (rx, rx)), mode="edge")
    h, w = p.shape
    out = np.zeros_like(p)
    for dy in range(kh):
        for dx in range(kw):
            out += k[kh - 1 - dy, kw - 1 - dx] * q[dy:dy + h, dx:dx + w]
    return out


def gaussian_blur(p, sigma):
    t = gaussian_taps(sigma)
    return conv2d(p, np.outer(t, t))


def laplacian(p):
    q = pad(p, 1)
    return q[:-2, 1:-1] + q[2:, 1:-1] + q[1:-1, :-2] + q[1:-1, 2:] - 4 * p


def log_filter(p, sigma):
    return laplacian(gaussian_blur(p, sigma))


def wiener(p, window, noise_var=None):
    r = window // 2
    q = pad(p, r)
    h, w = p.shape
    mean = np.zeros_like(p)
    var = np.zeros_like(p)
    for y in range(h):
        for x in range(w):
            blk = q[y:y + window, x:x + window]
            m = blk.mean()
            mean[y, x] = m
            var[y, x] = ((blk - m) ** 2).mean()
    nv = var.mean() if noise_var is None else noise_var
    out = np.empty_like(p)
    for y in range(h):
        for x in range(w):
            s2 = var[y, x]
            den = max(s2, nv)
            if den < 1e-12:
                out[y, x] = mean[y, x]
            else:
                out[y, x] = mean[y, x] + max(s2 - nv, 0.0) / den * (p[y, x] - mean[y, x])
    return out


def summarize(a1, a2, sigma=2.0, window=5):
    def per_source(a):
        base = np.stack([wiener(c, window) for c in a])
        lap = np.stack([log_filter(c, sigma) for c in a])
        sal = np.sqrt(((lap - base) ** 2).sum(axis=0))
        return base, a - base, sal

    b1, d1, s1 = per_source(a1)
    b2, d2, s2 = per_source(a2)
    den = s1 + s2
    tie = den < 1e-12
    w1 = np.where(tie, 0.5, s1 / np.where(tie, 1.0, den))
    w2 = np.where(tie, 0.5, s2 / np.where(tie, 1.0, den))
    detail = w1 * d1 + w2 * d2
    base = (b1 + b2) / 2
    return base + detail


def moving_square_video(n_frames=8, size=32):
    bg = (0.2, 0.3, 0.4)
    fg = (0.9, 0.8, 0.1)
    frames = []
    for k in range(n_frames):
        f = np.empty((3, size, size))
        for c in range(3):
            f[c].fill(bg[c])
            f[c, 12:20, 6 + 2 * k:14 + 2 * k] = fg[c]
        frames.append(f)
    return frames


if __name__ == "__main__":
    print("gauss sigma=0.5 center", repr(gaussian_taps(0.5)[2]))

    step = np.zeros((16, 16))
    step[:, 8:] = 1.0
    print("step detail sum", repr((step - gaussian_blur(step, 2.0)).sum()))

    frames = moving_square_video()
    a1 = frames[0]
    a2 = sum(frames) / len(frames)
    fused = summarize(a1, a2)
    print("fused sum", repr(fused.sum()))
    for c, y, x in ((0, 16, 10), (1, 16, 20), (2, 0, 0), (0, 12, 6), (2, 19, 27)):
        print("fused", c, y, x, repr(fused[c, y, x]))

    def edge_energy(img):
        return sum(np.abs(laplacian(ch)).sum() for ch in img)

    print("edge energy fused", repr(edge_energy(fused)), "avg", repr(edge_energy(a2)))
