#!/usr/bin/env python3
# Copyright 2026 The percept-xai Authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the frozen reference arrays in tests/data.

Each array comes from a route independent of the C++ code: numpy for the
closed-form primitives, OpenCV's Canny for the edge fixture. Run once and
commit the output; the unit tests only read the files.
"""

import argparse
import math
import pathlib

import cv2
import numpy as np


def write_array(path, arr, fmt="%.9f"):
    arr = np.asarray(arr)
    with open(path, "w") as f:
        f.write(" ".join(str(d) for d in arr.shape) + "\n")
        for row in arr.reshape(arr.shape[0], -1):
            f.write(" ".join(fmt % v for v in row) + "\n")


def grayscale_golden(out):
    rng = np.random.default_rng(20260415)
    img = rng.random((4, 4, 3)).astype(np.float32)
    lum = (0.299 * img[..., 0].astype(np.float64)
           + 0.587 * img[..., 1].astype(np.float64)
           + 0.114 * img[..., 2].astype(np.float64))
    write_array(out / "grayscale_4x4_input.txt", img.reshape(4, 12), "%.9e")
    write_array(out / "grayscale_4x4_luma.txt", lum, "%.12e")


def catmull_rom(t):
    t = abs(t)
    if t < 1:
        return 1.5 * t**3 - 2.5 * t**2 + 1
    if t < 2:
        return -0.5 * t**3 + 2.5 * t**2 - 4 * t + 2
    return 0.0


def bicubic_upscale(src, factor):
    """Direct 2-D evaluation; half-pixel centres, replicated border."""
    h, w = src.shape
    oh, ow = h * factor, w * factor
    out = np.zeros((oh, ow))
    for oy in range(oh):
        cy = (oy + 0.5) / factor - 0.5
        for ox in range(ow):
            cx = (ox + 0.5) / factor - 0.5
            acc = 0.0
            norm = 0.0
            for iy in range(math.floor(cy) - 1, math.floor(cy) + 3):
                for ix in range(math.floor(cx) - 1, math.floor(cx) + 3):
                    wgt = catmull_rom(iy - cy) * catmull_rom(ix - cx)
                    acc += wgt * src[min(max(iy, 0), h - 1),
                                     min(max(ix, 0), w - 1)]
                    norm += wgt
            out[oy, ox] = min(max(acc / norm, 0.0), 1.0)
    return out


def bicubic_golden(out):
    checker = np.array([[0.0, 1.0], [1.0, 0.0]])
    write_array(out / "bicubic_checker_x8.txt", bicubic_upscale(checker, 8))


def canny_golden(out):
    img = np.zeros((16, 16), np.float64)
    img[:, 8:] = 1.0
    smooth = cv2.GaussianBlur(img, (0, 0), 1.4,
                              borderType=cv2.BORDER_REPLICATE)
    # Scale so the int16 gradients keep resolution; thresholds are relative
    # to the image's peak magnitude, as in the library.
    dx = cv2.Sobel(smooth, cv2.CV_64F, 1, 0, ksize=3,
                   borderType=cv2.BORDER_REPLICATE) * 1000.0
    dy = cv2.Sobel(smooth, cv2.CV_64F, 0, 1, ksize=3,
                   borderType=cv2.BORDER_REPLICATE) * 1000.0
    peak = np.hypot(dx, dy).max()
    edges = cv2.Canny(np.round(dx).astype(np.int16),
                      np.round(dy).astype(np.int16),
                      0.1 * peak, 0.2 * peak, L2gradient=True)
    write_array(out / "canny_step_16x16.txt", (edges > 0).astype(int), "%d")


def gaussian_golden(out):
    radius = math.ceil(3 * 1.0)
    taps = np.exp(-0.5 * np.arange(-radius, radius + 1) ** 2)
    taps /= taps.sum()
    write_array(out / "gaussian_impulse_sigma1.txt",
                np.array([[taps[radius] ** 2]]), "%.12f")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).parent.parent / "data")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grayscale_golden(args.out)
    bicubic_golden(args.out)
    canny_golden(args.out)
    gaussian_golden(args.out)


if __name__ == "__main__":
    main()
