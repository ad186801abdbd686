#!/usr/bin/env python3
"""Independent least-squares / moment oracles over the published tables.

Computes the reference values frozen into the C++ tests. Uses numpy.polyfit,
which shares no code with the library's regression routine.
"""
import math
import numpy as np

tags_wiki = [281572, 277956, 141270, 77047, 41778, 22251, 11864, 6783, 3885]
tags_deli = [213755, 121639, 91254, 54255, 30916, 18199, 11422, 6146, 3546]
broader = [15572, 9143, 4219, 2831, 1997, 1491, 1100, 895, 718]

top25 = {
    "flickr": [700583, 648072, 506812, 467551, 466556, 441749, 413476, 397056, 375612, 364353,
               329385, 327222, 314712, 313853, 312039, 294374, 282541, 273209, 266324, 265264,
               264452, 263531, 254069, 245418, 244897],
    "wikipedia": [77769, 41825, 32166, 29971, 18693, 18073, 15128, 12903, 11474, 11043, 10217,
                  8695, 7727, 7707, 6982, 6457, 5652, 5200, 5111, 4877, 4862, 4656, 4136, 4077, 3720],
    "ddc": [60578, 23009, 22252, 21958, 9903, 9360, 8004, 7283, 6261, 5966, 5102, 4978, 4439,
            5104, 4068, 3678, 3625, 3499, 3486, 3444, 3141, 3134, 3029, 2987, 2943],
    "delicious": [902, 780, 661, 619, 601, 589, 562, 472, 447, 409, 404, 318, 317, 314, 299, 296,
                  291, 280, 276, 267, 263, 260, 253, 251, 248],
    "millionsofgames": [262, 260, 148, 140, 122, 119, 110, 99, 95, 91, 82, 78, 70, 64, 64, 60, 56,
                        55, 55, 53, 53, 52, 49, 49, 48],
}

levels_ddc = [1, 10, 99, 879, 8121, 11372, 12360, 7354, 2917, 923, 248, 36, 11, 2]
levels_wiki = [899, 67, 448, 4915, 16753, 29914, 26992, 13141, 3043, 435, 241, 128, 55, 7]


def exp_fit(counts):
    n = np.arange(1, len(counts) + 1)
    slope, _ = np.polyfit(n, np.log(counts), 1)
    return -slope


def rank_fit(counts):
    r = np.arange(1, len(counts) + 1)
    slope, _ = np.polyfit(np.log(r), np.log(counts), 1)
    return -slope


def moments(levels, exclude0=True):
    lv = np.arange(len(levels))
    w = np.array(levels, dtype=float)
    if exclude0:
        lv, w = lv[1:], w[1:]
    m = (lv * w).sum() / w.sum()
    s = math.sqrt(((lv - m) ** 2 * w).sum() / w.sum())
    return m, s


print("exp wikipedia %.6f" % exp_fit(tags_wiki))
print("exp delicious %.6f" % exp_fit(tags_deli))
print("exp broader   %.6f" % exp_fit(broader))
for k, v in top25.items():
    print("rank %-16s %.6f" % (k, rank_fit(v)))
print("normal ddc  excl0 %.6f %.6f" % moments(levels_ddc))
print("normal wiki excl0 %.6f %.6f" % moments(levels_wiki))
print("normal wiki incl0 %.6f %.6f" % moments(levels_wiki, False))
total = 923196
print("wiki pct", [int(math.floor(100 * c / total + 0.5)) for c in [52264] + tags_wiki],
      sum(tags_wiki) + 52264)
tot_d = 564330
print("deli pct", [int(math.floor(100 * c / tot_d + 0.5)) for c in tags_deli], sum(tags_deli))
